// Wire types for the evaluation service API (schema api/1).

export interface RegistryCardinalities {
  economies: number;
  indices: number;
  companies: number;
  macro_indicators: number;
  corporate_metrics: number;
  subcategories: number;
  grounding_rules: number;
  corporate_event_types: number;
}

export interface HealthResponse {
  schema: string;
  status: string;
  registry: RegistryCardinalities;
}

export interface TaskView {
  id: string;
  question: string;
  state: string;
  track: string;
  level: string;
  market: string;
  horizon: string;
  week: string;
  t_g: string;
  t_d: string;
  t_e: string;
  truth: { value: string | number; method: string; determined_at: string } | null;
}

export interface CandidateCard {
  candidate_id: string;
  stage: string;
  question: string | null;
  uncertainty: number | null;
  risk_notes: string;
  kind: string;
  classification: string;
  evidence_record_ids: string[];
  task_id: string | null;
}

export interface ApprovalReport {
  drafted: number;
  decided: number;
  approved: number;
  approval_rate_pct: number | null;
  guideline_pct: number;
}

export interface CandidatesResponse {
  schema: string;
  candidates: CandidateCard[];
  approval_report: ApprovalReport;
}

export interface PhaseCheck {
  quantity: string;
  comparator: string;
  required: number;
  observed: number | null;
  satisfied: boolean;
}

export interface ProposalView {
  task_id: string;
  question: string;
  proposed: "YES" | "NO";
  basis: string;
  phase1: string[];
  phase2: PhaseCheck[];
  phase3: string[];
  assembled_at: string;
}

export interface LeaderboardSlice {
  n: number;
  accuracy: number;
  [key: string]: string | number;
}

export interface LeaderboardResponse {
  schema: string;
  grouping: string[];
  slices: LeaderboardSlice[];
  export: string;
  no_data: boolean;
}

export type Verdict = "Approve" | "Reject";
