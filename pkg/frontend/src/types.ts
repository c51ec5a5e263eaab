// Wire types for the correction service's JSON payloads.  The recorded
// request/response fixture (fixtures/fig1_session.json) is the shared
// contract; these shapes mirror it and nothing here recomputes scores.

export type Variable = "num" | "gen" | "per";

export interface ProfileView {
  k_majority: number;
  k_phonetics: number;
  k_omission: number;
  k_governor: number;
  t: number;
  t_floor: number;
  eta: number;
  delta: number;
  strategy: string;
  update_count: number;
}

export interface VectorView {
  value: string;
  scores: Record<string, number>;
  total: number;
  percentage: number;
}

export interface AggregateView {
  strategy: string;
  totals: Record<string, number>;
  winner: string | null;
  tie: boolean;
  margin: number;
}

export interface QuestionOptionView {
  value: string;
  phrase: string;
  label: string;
  text: string;
  percentage: number;
}

export interface QuestionView {
  id: string;
  variable: Variable;
  sentence_text: string;
  highlighted_text: string;
  members: number[];
  pivot: number;
  prompt: string;
  options: QuestionOptionView[];
}

export interface SubgroupView {
  members: number[];
  governor: number;
  vectors: VectorView[];
}

export interface DecisionView {
  kind: string;
  value: string | null;
  question: QuestionView | null;
  vectors: VectorView[];
  subgroups: SubgroupView[];
  aggregate: AggregateView | null;
}

export interface WeightDelta {
  before: number;
  after: number;
  direction: "up" | "down" | "same";
}

export interface StepView {
  pass: number;
  variable: Variable;
  members: number[];
  surfaces: string[];
  governor: number;
  decision: DecisionView;
  applied_value: string | null;
  asked: boolean;
  threshold_before: number;
  threshold_after: number;
  weight_deltas: Record<string, WeightDelta> | null;
}

export interface ReportView {
  sentence_id: string;
  original_text: string;
  corrected_text: string;
  treebank: string;
  converged: boolean;
  passes: number;
  steps: StepView[];
  pending_question: QuestionView | null;
  pending_decision: DecisionView | null;
  unresolved: { variable: string; members: number[] }[];
  profile_before: ProfileView;
  profile_after: ProfileView;
}

export interface SessionView {
  id: string;
  profile_id: string | null;
  converged: boolean;
  pending_question: QuestionView | null;
  answers: { question_id: string; value: string }[];
  reports: ReportView[];
  profile: ProfileView;
  // Present on answer responses only; views must not depend on it, so a
  // page refresh (GET) reconstructs the identical rendering.
  answer_effect?: Record<string, { before: number; after: number }>;
}

export interface ApiErrorBody {
  code: string;
  message: string;
  detail: unknown;
}

export const CRITERIA = ["majority", "phonetics", "omission", "governor"] as const;
export type Criterion = (typeof CRITERIA)[number];

export const VARIABLE_NAMES: Record<Variable, string> = {
  num: "number",
  gen: "gender",
  per: "person",
};
