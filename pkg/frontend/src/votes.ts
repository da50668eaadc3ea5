// Vote panel projection: proposal metadata plus the running tally preview,
// all straight from server responses.

import type { ProposalInfo } from "./types.js";

export interface VotePanel {
  proposalId: string;
  kind: string;
  state: string;
  open: boolean;
  yes: number;
  no: number;
  abstain: number;
  turnout: number;
  totalWeight: number;
  choices: ("Yes" | "No" | "Abstain")[];
}

export function votePanel(proposal: ProposalInfo, authenticated: boolean): VotePanel {
  const { Yes, No, Abstain } = proposal.votes_cast;
  const open = proposal.state === "Open";
  return {
    proposalId: proposal.proposal_id,
    kind: proposal.kind,
    state: proposal.state,
    open,
    yes: Yes,
    no: No,
    abstain: Abstain,
    turnout: Yes + No + Abstain,
    totalWeight: proposal.total_snapshot_weight,
    choices: open && authenticated ? ["Yes", "No", "Abstain"] : [],
  };
}
