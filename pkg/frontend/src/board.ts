// Case board projections. Pure data-in/data-out: a card is computed from a
// server CaseReport and the console session gate, and the buttons on a card
// are exactly the server's next_events — the console invents no transitions
// of its own.

import type { CaseReport } from "./types.js";

export interface EventField {
  name: string;
  label: string;
  kind: "text" | "select";
  options?: string[];
  required: boolean;
}

// extra inputs an event needs before it can be posted
export const EVENT_FIELDS: Record<string, EventField[]> = {
  identity_passed: [{ name: "session_id", label: "Passed session id", kind: "text", required: true }],
  identity_failed: [{ name: "session_id", label: "Session id (optional)", kind: "text", required: false }],
  resolve: [
    {
      name: "kind",
      label: "Resolution",
      kind: "select",
      options: ["LegalAction", "Settlement", "Other"],
      required: true,
    },
  ],
  collect_feedback: [{ name: "feedback", label: "Feedback text", kind: "text", required: true }],
  progress_update: [{ name: "note", label: "Progress note", kind: "text", required: true }],
  attach_evidence: [{ name: "content", label: "Evidence content", kind: "text", required: true }],
};

export interface EventButton {
  event: string;
  enabled: boolean;
  fields: EventField[];
}

export interface CaseCard {
  caseId: string;
  reporter: string;
  state: string;
  terminal: boolean;
  badges: string[];
  evidenceCount: number;
  team: string[];
  buttons: EventButton[];
}

export function caseCard(report: CaseReport, authenticated: boolean): CaseCard {
  const badges: string[] = [];
  if (report.financial_support_active) badges.push("financial support");
  if (report.counseling_active) badges.push("counseling");
  if (report.resolution) badges.push(`resolution: ${report.resolution}`);
  if (report.progress_count > 0) badges.push(`${report.progress_count} progress notes`);
  return {
    caseId: report.case_id,
    reporter: report.reporter,
    state: report.state,
    terminal: report.next_events.length === 0,
    badges,
    evidenceCount: report.evidence.length,
    team: report.team,
    buttons: report.next_events.map((event) => ({
      event,
      enabled: authenticated,
      fields: EVENT_FIELDS[event] ?? [],
    })),
  };
}

export function caseBoard(reports: CaseReport[], authenticated: boolean): CaseCard[] {
  return reports
    .slice()
    .sort((a, b) => a.case_id.localeCompare(b.case_id, undefined, { numeric: true }))
    .map((report) => caseCard(report, authenticated));
}

// the banner text for a failed mutation: the server's code, verbatim
export function errorBanner(err: { error_code: string }): string {
  return err.error_code;
}
