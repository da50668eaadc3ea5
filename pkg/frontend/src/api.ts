// Typed fetch client for the gateway. Every non-2xx response becomes an
// ApiError carrying the server's error_code verbatim; views display that
// code untranslated.

import type {
  AssignmentInfo,
  CaseReport,
  ChallengeSetInfo,
  LedgerFilters,
  LedgerRecord,
  ProposalInfo,
  SessionInfo,
} from "./types.js";

export class ApiError extends Error {
  constructor(
    public readonly error_code: string,
    message: string,
    public readonly status: number,
  ) {
    super(message);
  }
}

export class GatewayClient {
  constructor(
    private readonly baseUrl: string,
    private readonly sessionToken: () => string | null = () => null,
  ) {}

  private async request<T>(method: string, path: string, body?: unknown): Promise<T> {
    const headers: Record<string, string> = { "content-type": "application/json" };
    const token = this.sessionToken();
    if (token) headers["x-auth-session"] = token;
    let resp: Response;
    try {
      resp = await fetch(this.baseUrl + path, {
        method,
        headers,
        body: body === undefined ? undefined : JSON.stringify(body),
      });
    } catch (err) {
      throw new ApiError("GatewayUnreachable", String(err), 0);
    }
    const text = await resp.text();
    const payload = text ? JSON.parse(text) : null;
    if (!resp.ok) {
      const code = payload?.error_code ?? "GatewayError";
      throw new ApiError(code, payload?.message ?? resp.statusText, resp.status);
    }
    return payload as T;
  }

  private get<T>(path: string): Promise<T> {
    return this.request<T>("GET", path);
  }

  private post<T>(path: string, body?: unknown): Promise<T> {
    return this.request<T>("POST", path, body);
  }

  // health / ledger
  health(): Promise<{ status: string; ledger_len: number }> {
    return this.get("/health");
  }

  ledger(filters: LedgerFilters = {}): Promise<LedgerRecord[]> {
    const params = new URLSearchParams();
    for (const [key, value] of Object.entries(filters)) {
      if (value !== undefined && value !== "") params.set(key, String(value));
    }
    const query = params.toString();
    return this.get(`/ledger${query ? "?" + query : ""}`);
  }

  verifyChain(): Promise<{ ok: boolean; first_bad_seq: number | null }> {
    return this.post("/ledger/verify");
  }

  // cases
  listCases(reporter?: string): Promise<CaseReport[]> {
    return this.get(`/cases${reporter ? `?reporter=${encodeURIComponent(reporter)}` : ""}`);
  }

  getCase(caseId: string): Promise<CaseReport> {
    return this.get(`/cases/${encodeURIComponent(caseId)}`);
  }

  reportIncident(reporter: string, details: string): Promise<CaseReport> {
    return this.post("/cases", { reporter, details });
  }

  submitCaseEvent(caseId: string, event: string, args: Record<string, unknown> = {}): Promise<CaseReport> {
    return this.post(`/cases/${encodeURIComponent(caseId)}/events`, { event, ...args });
  }

  attachEvidence(caseId: string, content: string): Promise<{ case_id: string; asset_id: string }> {
    return this.post(`/cases/${encodeURIComponent(caseId)}/evidence`, { content });
  }

  // identity
  createChallengeSet(body: unknown): Promise<ChallengeSetInfo> {
    return this.post("/auth/challenge-sets", body);
  }

  openSession(actorId: string, setId: string): Promise<SessionInfo> {
    return this.post("/auth/sessions", { actor_id: actorId, set_id: setId });
  }

  getSession(sessionId: string): Promise<SessionInfo> {
    return this.get(`/auth/sessions/${encodeURIComponent(sessionId)}`);
  }

  submitResponse(sessionId: string, challengeId: string, responseText: string): Promise<unknown> {
    return this.post(`/auth/sessions/${encodeURIComponent(sessionId)}/responses`, {
      challenge_id: challengeId,
      response_text: responseText,
    });
  }

  evaluateSession(sessionId: string): Promise<{ session_id: string; passed: boolean; state: string }> {
    return this.post(`/auth/sessions/${encodeURIComponent(sessionId)}/evaluate`);
  }

  // roles
  onboard(actorId: string, roleName: string): Promise<AssignmentInfo> {
    return this.post("/roles/onboard", { actor_id: actorId, role_name: roleName });
  }

  rolesOverview(): Promise<{ roles: { role_name: string; kind: string; sbt_required: boolean }[]; assignments: AssignmentInfo[] }> {
    return this.get("/roles");
  }

  // governance
  listProposals(): Promise<ProposalInfo[]> {
    return this.get("/governance/proposals");
  }

  getProposal(proposalId: string): Promise<ProposalInfo> {
    return this.get(`/governance/proposals/${encodeURIComponent(proposalId)}`);
  }

  vote(proposalId: string, voter: string, choice: "Yes" | "No" | "Abstain"): Promise<unknown> {
    return this.post(`/governance/proposals/${encodeURIComponent(proposalId)}/votes`, { voter, choice });
  }

  tally(proposalId: string): Promise<unknown> {
    return this.post(`/governance/proposals/${encodeURIComponent(proposalId)}/tally`, {});
  }
}
