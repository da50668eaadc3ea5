// Role onboarding wizard: walk an actor through challenge entry to a passed
// identity session, then onboard them into a role. Each step round-trips to
// the server; the wizard never decides pass/fail itself.

import type { GatewayClient } from "./api.js";
import type { ChallengeSetInfo, SessionInfo } from "./types.js";

export interface WizardState {
  step: "pick-set" | "answer" | "evaluated" | "onboarded";
  actorId: string;
  setInfo: ChallengeSetInfo | null;
  session: SessionInfo | null;
  passed: boolean | null;
  assignmentId: string | null;
}

export function startWizard(actorId: string): WizardState {
  return { step: "pick-set", actorId, setInfo: null, session: null, passed: null, assignmentId: null };
}

export async function beginChallenges(
  state: WizardState,
  client: GatewayClient,
  setInfo: ChallengeSetInfo,
): Promise<WizardState> {
  const session = await client.openSession(state.actorId, setInfo.set_id);
  return { ...state, step: "answer", setInfo, session };
}

export async function answerAll(
  state: WizardState,
  client: GatewayClient,
  answers: Record<string, string>,
): Promise<WizardState> {
  if (!state.session || !state.setInfo) throw new Error("wizard has no open session");
  for (const challenge of state.setInfo.challenges) {
    const text = answers[challenge.challenge_id];
    if (text !== undefined && text !== "") {
      await client.submitResponse(state.session.session_id, challenge.challenge_id, text);
    }
  }
  const decision = await client.evaluateSession(state.session.session_id);
  const session = await client.getSession(state.session.session_id);
  return { ...state, step: "evaluated", passed: decision.passed, session };
}

export async function finishOnboarding(
  state: WizardState,
  client: GatewayClient,
  roleName: string,
): Promise<WizardState> {
  const assignment = await client.onboard(state.actorId, roleName);
  return { ...state, step: "onboarded", assignmentId: assignment.assignment_id };
}
