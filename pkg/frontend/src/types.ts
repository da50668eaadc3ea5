// Wire types mirroring the gateway's JSON responses.

export type CaseStateName =
  | "Reported"
  | "IdentityVerified"
  | "Recorded"
  | "LegalContractActive"
  | "ProviderEngaged"
  | "InProceedings"
  | "Resolved"
  | "FeedbackCollected"
  | "Closed"
  | "RejectedUnverified";

export interface CaseReport {
  case_id: string;
  reporter: string;
  state: CaseStateName;
  identity_session: string | null;
  evidence: string[];
  evidence_digests: string[];
  team: string[];
  financial_support_active: boolean;
  counseling_active: boolean;
  progress_count: number;
  resolution: string | null;
  feedback_digest: string | null;
  next_events: string[];
}

export interface SessionInfo {
  session_id: string;
  actor_id: string;
  set_id: string;
  state: "Open" | "Passed" | "Failed" | "Terminated";
  responses_submitted: string[];
}

export interface ChallengeSetInfo {
  set_id: string;
  context: string;
  policy: { kind: string; m?: number };
  challenges: { challenge_id: string; kind: string; prompt: string }[];
}

export interface AssignmentInfo {
  assignment_id: string;
  actor_id: string;
  role_name: string;
  status: string;
  onboard_session: string | null;
  reward_total_ut: number;
}

export interface ProposalInfo {
  proposal_id: string;
  proposer: string;
  kind: string;
  payload_digest: string;
  opens_at: number;
  closes_at: number;
  state: "Open" | "Accepted" | "Rejected" | "Executed";
  total_snapshot_weight: number;
  votes_cast: { Yes: number; No: number; Abstain: number };
}

export interface LedgerRecord {
  seq: number;
  logical_time: number;
  component: string;
  local_id: number;
  actor_ids: string[];
  component_ids: string[];
  payload_digest: string;
  prev_hash: string;
  hash: string;
}

export interface LedgerFilters {
  component?: string;
  actor_id?: string;
  case_id?: string;
}
