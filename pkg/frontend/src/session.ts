// Operator console session: who is driving, and which identity session
// backs them. Mutations stay disabled until the token references a session
// the server reports as Passed; the server is the authority, the console
// only caches the last look-up.

import type { GatewayClient } from "./api.js";

export type View = "board" | "wizard" | "votes" | "ledger";

export interface ConsoleSession {
  operator: string | null;
  sessionToken: string | null;
  sessionState: string | null;
  activeView: View;
}

export function freshSession(): ConsoleSession {
  return { operator: null, sessionToken: null, sessionState: null, activeView: "board" };
}

export function canMutate(session: ConsoleSession): boolean {
  return session.sessionState === "Passed";
}

export async function adoptToken(
  session: ConsoleSession,
  client: GatewayClient,
  token: string,
): Promise<ConsoleSession> {
  const info = await client.getSession(token);
  return {
    ...session,
    operator: info.actor_id,
    sessionToken: token,
    sessionState: info.state,
  };
}
