// Application shell: renders the active view from server truth and wires
// buttons back to gateway calls. No optimistic updates anywhere — after
// every mutation the affected view re-fetches.

import { ApiError, GatewayClient } from "./api.js";
import { caseBoard, errorBanner, type CaseCard, type EventButton } from "./board.js";
import { ledgerRows } from "./ledger.js";
import { adoptToken, canMutate, freshSession, type ConsoleSession, type View } from "./session.js";
import { votePanel } from "./votes.js";

const GATEWAY_URL =
  new URLSearchParams(window.location.search).get("gateway") ?? "http://127.0.0.1:8710";

let session: ConsoleSession = freshSession();
const client = new GatewayClient(GATEWAY_URL, () => session.sessionToken);

const root = document.getElementById("app")!;
let pollTimer: number | undefined;

function el<K extends keyof HTMLElementTagNameMap>(
  tag: K,
  attrs: Record<string, string> = {},
  ...children: (Node | string)[]
): HTMLElementTagNameMap[K] {
  const node = document.createElement(tag);
  for (const [key, value] of Object.entries(attrs)) {
    if (key === "class") node.className = value;
    else node.setAttribute(key, value);
  }
  node.append(...children);
  return node;
}

function banner(message: string, kind: "error" | "info" = "error"): HTMLElement {
  return el("div", { class: `banner ${kind}` }, message);
}

async function setView(view: View) {
  session = { ...session, activeView: view };
  await render();
}

async function render() {
  if (pollTimer !== undefined) window.clearTimeout(pollTimer);
  root.replaceChildren(header());
  try {
    switch (session.activeView) {
      case "board":
        root.append(await boardView());
        pollTimer = window.setTimeout(render, 5000);
        break;
      case "wizard":
        root.append(wizardView());
        break;
      case "votes":
        root.append(await votesView());
        break;
      case "ledger":
        root.append(await ledgerView({}));
        break;
    }
  } catch (err) {
    root.append(banner(err instanceof ApiError ? errorBanner(err) : String(err)));
  }
}

function header(): HTMLElement {
  const tokenInput = el("input", {
    placeholder: "identity session token (session-N)",
    value: session.sessionToken ?? "",
  });
  const adopt = el("button", {}, "use token");
  adopt.onclick = async () => {
    try {
      session = await adoptToken(session, client, tokenInput.value.trim());
    } catch (err) {
      session = { ...session, sessionToken: tokenInput.value.trim(), sessionState: null };
      root.prepend(banner(err instanceof ApiError ? errorBanner(err) : String(err)));
      return;
    }
    await render();
  };
  const status = canMutate(session)
    ? `operator ${session.operator} (verified)`
    : "read-only: no passed identity session";
  const nav = el("nav", {});
  for (const view of ["board", "wizard", "votes", "ledger"] as View[]) {
    const button = el("button", { class: session.activeView === view ? "active" : "" }, view);
    button.onclick = () => void setView(view);
    nav.append(button);
  }
  return el(
    "header",
    {},
    el("h1", {}, "relief console"),
    nav,
    el("div", { class: "auth" }, tokenInput, adopt, el("span", { class: "status" }, status)),
  );
}

// -- case board ---------------------------------------------------------------

async function boardView(): Promise<HTMLElement> {
  const reports = await client.listCases();
  const cards = caseBoard(reports, canMutate(session));
  const wrap = el("section", { class: "board" });
  if (cards.length === 0) wrap.append(el("p", {}, "no cases yet"));
  for (const card of cards) wrap.append(renderCard(card));
  return wrap;
}

function renderCard(card: CaseCard): HTMLElement {
  const node = el(
    "article",
    { class: "case-card", "data-case": card.caseId },
    el("h2", {}, `${card.caseId} — ${card.state}`),
    el("p", {}, `reporter: ${card.reporter} · evidence: ${card.evidenceCount}`),
  );
  if (card.badges.length) node.append(el("p", { class: "badges" }, card.badges.join(" · ")));
  if (card.team.length) node.append(el("p", {}, `team: ${card.team.join(", ")}`));
  if (card.terminal) {
    node.append(el("p", { class: "terminal" }, "terminal state"));
    return node;
  }
  const actions = el("div", { class: "actions" });
  for (const button of card.buttons) actions.append(renderEventButton(card, button));
  node.append(actions);
  return node;
}

function renderEventButton(card: CaseCard, button: EventButton): HTMLElement {
  const form = el("form", { class: "event" });
  const inputs: Record<string, HTMLInputElement | HTMLSelectElement> = {};
  for (const field of button.fields) {
    let input: HTMLInputElement | HTMLSelectElement;
    if (field.kind === "select") {
      input = el("select", {});
      for (const option of field.options ?? []) input.append(el("option", { value: option }, option));
    } else {
      input = el("input", { placeholder: field.label });
    }
    inputs[field.name] = input;
    form.append(input);
  }
  const submit = el("button", { type: "submit" }, button.event);
  if (!button.enabled) submit.setAttribute("disabled", "disabled");
  form.append(submit);
  form.onsubmit = async (ev) => {
    ev.preventDefault();
    const args: Record<string, unknown> = {};
    for (const [name, input] of Object.entries(inputs)) {
      if (input.value !== "") args[name] = input.value;
    }
    try {
      await client.submitCaseEvent(card.caseId, button.event, args);
    } catch (err) {
      form.append(banner(err instanceof ApiError ? errorBanner(err) : String(err)));
      return;
    }
    await render(); // server truth, never optimistic
  };
  return form;
}

// -- onboarding wizard -----------------------------------------------------------

function wizardView(): HTMLElement {
  const wrap = el("section", { class: "wizard" }, el("h2", {}, "role onboarding"));
  const actor = el("input", { placeholder: "actor id" });
  const setId = el("input", { placeholder: "challenge set id (set-N)" });
  const role = el("input", { placeholder: "role name (e.g. psychologist)" });
  const start = el("button", {}, "open session");
  const log = el("pre", {});
  const answers = el("div", {});
  wrap.append(el("div", {}, actor, setId, role, start), answers, log);

  start.onclick = async () => {
    try {
      const sessionInfo = await client.openSession(actor.value.trim(), setId.value.trim());
      log.textContent = `session ${sessionInfo.session_id} opened`;
      answers.replaceChildren();
      // challenge entry is free-form by challenge id; prompts live in the
      // operator's copy of the set definition
      const challengeId = el("input", { placeholder: "challenge id" });
      const responseText = el("input", { placeholder: "response" });
      const send = el("button", {}, "submit response");
      const evaluate = el("button", {}, "evaluate");
      const onboardBtn = el("button", {}, "onboard role");
      send.onclick = async () => {
        await client.submitResponse(sessionInfo.session_id, challengeId.value.trim(), responseText.value);
        log.textContent += `\nresponse recorded for ${challengeId.value.trim()}`;
      };
      evaluate.onclick = async () => {
        const decision = await client.evaluateSession(sessionInfo.session_id);
        log.textContent += `\nevaluation: ${decision.passed ? "Passed" : "Failed"}`;
      };
      onboardBtn.onclick = async () => {
        try {
          const assignment = await client.onboard(actor.value.trim(), role.value.trim());
          log.textContent += `\nonboarded: ${assignment.assignment_id} (${assignment.status})`;
        } catch (err) {
          log.textContent += `\n${err instanceof ApiError ? errorBanner(err) : String(err)}`;
        }
      };
      answers.append(challengeId, responseText, send, evaluate, onboardBtn);
    } catch (err) {
      log.textContent = err instanceof ApiError ? errorBanner(err) : String(err);
    }
  };
  return wrap;
}

// -- vote panel --------------------------------------------------------------------

async function votesView(): Promise<HTMLElement> {
  const proposals = await client.listProposals();
  const wrap = el("section", { class: "votes" }, el("h2", {}, "proposals"));
  if (proposals.length === 0) wrap.append(el("p", {}, "no proposals"));
  for (const proposal of proposals) {
    const panel = votePanel(proposal, canMutate(session));
    const node = el(
      "article",
      { class: "proposal" },
      el("h3", {}, `${panel.proposalId} — ${panel.kind} (${panel.state})`),
      el(
        "p",
        {},
        `yes ${panel.yes} · no ${panel.no} · abstain ${panel.abstain} · turnout ${panel.turnout}/${panel.totalWeight}`,
      ),
    );
    for (const choice of panel.choices) {
      const button = el("button", {}, `vote ${choice}`);
      button.onclick = async () => {
        try {
          await client.vote(panel.proposalId, session.operator ?? "", choice);
        } catch (err) {
          node.append(banner(err instanceof ApiError ? errorBanner(err) : String(err)));
          return;
        }
        await render();
      };
      node.append(button);
    }
    wrap.append(node);
  }
  return wrap;
}

// -- ledger browser ---------------------------------------------------------------------

async function ledgerView(filters: { component?: string; actor_id?: string; case_id?: string }): Promise<HTMLElement> {
  const records = await client.ledger(filters);
  const rows = ledgerRows(records);
  const wrap = el("section", { class: "ledger" }, el("h2", {}, `ledger (${rows.length} records)`));
  const componentInput = el("input", { placeholder: "component (e.g. RolesManager)", value: filters.component ?? "" });
  const actorInput = el("input", { placeholder: "actor id", value: filters.actor_id ?? "" });
  const caseInput = el("input", { placeholder: "case id", value: filters.case_id ?? "" });
  const apply = el("button", {}, "filter");
  apply.onclick = async () => {
    const next = await ledgerView({
      component: componentInput.value.trim() || undefined,
      actor_id: actorInput.value.trim() || undefined,
      case_id: caseInput.value.trim() || undefined,
    });
    wrap.replaceWith(next);
  };
  wrap.append(el("div", { class: "filters" }, componentInput, actorInput, caseInput, apply));
  const table = el("table", {});
  table.append(
    el(
      "tr",
      {},
      ...["seq", "time", "kind", "actors", "tags", "hash"].map((h) => el("th", {}, h)),
    ),
  );
  for (const row of rows) {
    table.append(
      el(
        "tr",
        {},
        el("td", {}, String(row.seq)),
        el("td", {}, String(row.time)),
        el("td", {}, row.kind),
        el("td", {}, row.actors),
        el("td", {}, row.tags),
        el("td", { class: "hash" }, row.hashPrefix),
      ),
    );
  }
  wrap.append(table);
  return wrap;
}

void render();
