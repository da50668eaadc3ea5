"""Deterministic scenario runner.

A script is an ordered list of engine operations with optional expected
outcomes, followed by end-state assertions. Steps run against a fresh
engine; execution halts on the first unexpected outcome and the transcript
(one entry per executed step) reports the triggering index. Identical
scripts and configs produce byte-identical transcripts.

Argument values of the form ``"$<step>.<field>[.<field>…]"`` are replaced
by the referenced field of an earlier step's result, so scripts can thread
generated ids (sessions, cases, proposals) through later steps.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from importlib import resources
from pathlib import Path
from typing import Optional

from .engine import Engine, EngineConfig
from .errors import AssertionFailed, DaoError, MalformedScript

# scenario-invocable engine operations
OPS = {
    "append_transaction",
    "verify_chain",
    "catalog_lookup",
    "query_ledger",
    "mint",
    "transfer",
    "mint_evidence_nft",
    "balance",
    "create_challenge_set",
    "open_session",
    "submit_response",
    "evaluate",
    "onboard",
    "offboard",
    "terminate_participation",
    "reward",
    "propose",
    "vote",
    "tally",
    "execute",
    "report_incident",
    "advance",
    "assemble_response_team",
    "attach_evidence",
    "case_report",
    "diagnose_sextortion",
    "diagnose_legal_aid",
    "score_mental_health_assessment",
    "score_situation_assessment",
    "role_information",
    "advance_clock",
    "set_oracle_verdict",
}

ASSERTION_KINDS = ("LedgerCount", "TokenBalance", "CaseState", "ChainValid")


@dataclass
class StepResult:
    index: int
    op: str
    ok: bool
    result: Optional[object] = None
    error_code: Optional[str] = None

    def to_json_obj(self) -> dict:
        obj = {"index": self.index, "op": self.op, "ok": self.ok}
        if self.result is not None:
            obj["result"] = self.result
        if self.error_code is not None:
            obj["error_code"] = self.error_code
        return obj


@dataclass
class RunTranscript:
    scenario: str
    steps: list[StepResult] = field(default_factory=list)
    assertions: list[dict] = field(default_factory=list)
    ledger_len_before: int = 0
    ledger_len_after: int = 0
    ok: bool = True
    failed_step: Optional[int] = None

    def to_json_obj(self) -> dict:
        return {
            "scenario": self.scenario,
            "steps": [s.to_json_obj() for s in self.steps],
            "assertions": self.assertions,
            "ledger_len_before": self.ledger_len_before,
            "ledger_len_after": self.ledger_len_after,
            "ok": self.ok,
            "failed_step": self.failed_step,
        }

    def to_json(self) -> str:
        return json.dumps(self.to_json_obj(), sort_keys=True, indent=2)


def load_script(path: str | Path) -> dict:
    return _validate_script(json.loads(Path(path).read_text(encoding="utf-8")))


def load_bundled_script(name: str) -> dict:
    raw = resources.files("reliefdao.scenarios").joinpath(f"{name}.json").read_text("utf-8")
    return _validate_script(json.loads(raw))


def _validate_script(script: dict) -> dict:
    if not isinstance(script, dict) or "name" not in script:
        raise MalformedScript("script must be an object with a name")
    steps = script.get("steps", [])
    if not isinstance(steps, list):
        raise MalformedScript("steps must be a list")
    for i, step in enumerate(steps):
        if not isinstance(step, dict) or "op" not in step:
            raise MalformedScript(f"step {i} is not an object with an op")
        if step["op"] not in OPS:
            raise MalformedScript(f"step {i}: unknown op {step['op']!r}")
        if not isinstance(step.get("args", {}), dict):
            raise MalformedScript(f"step {i}: args must be an object")
    for i, assertion in enumerate(script.get("final_assertions", [])):
        if assertion.get("kind") not in ASSERTION_KINDS:
            raise MalformedScript(f"assertion {i}: unknown kind {assertion.get('kind')!r}")
    return script


def _resolve(value, results: list[StepResult]):
    if isinstance(value, str) and value.startswith("$"):
        head, *path = value[1:].split(".")
        try:
            node = results[int(head)].result
        except (ValueError, IndexError):
            raise MalformedScript(f"bad step reference {value!r}") from None
        for part in path:
            node = node[part] if isinstance(node, dict) else node[int(part)]
        return node
    if isinstance(value, list):
        return [_resolve(v, results) for v in value]
    if isinstance(value, dict):
        return {k: _resolve(v, results) for k, v in value.items()}
    return value


def _run_op(engine: Engine, op: str, args: dict):
    if op == "set_oracle_verdict":
        engine.oracle.set_verdict(args["oracle_id"], bool(args["verdict"]))
        return {"oracle_id": args["oracle_id"], "verdict": bool(args["verdict"])}
    if op == "advance":
        kwargs = dict(args)
        case_id = kwargs.pop("case_id")
        event = kwargs.pop("event")
        return engine.advance(case_id, event, **kwargs)
    return getattr(engine, op)(**args)


def run_scenario(
    script: dict,
    config: Optional[EngineConfig] = None,
    engine: Optional[Engine] = None,
    raise_on_failure: bool = False,
) -> RunTranscript:
    script = _validate_script(script)
    if engine is None:
        engine = Engine(config)
    fixture = script.get("fixture")
    if fixture:
        # a fixture pre-populates the engine: another scenario, or a snapshot
        if "scenario" in fixture:
            name = fixture["scenario"]
            base = load_script(name) if Path(name).exists() else load_bundled_script(name)
            prelude = run_scenario(base, engine=engine)
            if not prelude.ok:
                raise MalformedScript(f"fixture scenario {name!r} failed at step {prelude.failed_step}")
        elif "snapshot" in fixture:
            engine.import_state(fixture["snapshot"])
        else:
            raise MalformedScript("fixture must name a scenario or a snapshot")
    transcript = RunTranscript(scenario=script["name"], ledger_len_before=len(engine.ledger))

    for index, step in enumerate(script.get("steps", [])):
        args = _resolve(step.get("args", {}), transcript.steps)
        expect = step.get("expect", {"ok": True})
        try:
            result = _run_op(engine, step["op"], args)
            outcome = StepResult(index=index, op=step["op"], ok=True, result=result)
            matched = expect.get("ok", True) is True
        except DaoError as err:
            outcome = StepResult(index=index, op=step["op"], ok=False, error_code=err.error_code)
            matched = expect.get("ok", True) is False and (
                "error_code" not in expect or expect["error_code"] == err.error_code
            )
        if matched:
            # an expected error is a successful step from the script's viewpoint
            outcome.ok = True
            transcript.steps.append(outcome)
            continue
        outcome.ok = False
        transcript.steps.append(outcome)
        transcript.ok = False
        transcript.failed_step = index
        break

    if transcript.ok:
        for assertion in script.get("final_assertions", []):
            entry = _check_assertion(engine, assertion, transcript.steps)
            transcript.assertions.append(entry)
            if not entry["ok"]:
                transcript.ok = False

    transcript.ledger_len_after = len(engine.ledger)
    if not transcript.ok and raise_on_failure:
        raise AssertionFailed(
            f"scenario {script['name']!r} failed"
            + (f" at step {transcript.failed_step}" if transcript.failed_step is not None else ""),
            step_index=transcript.failed_step,
        )
    return transcript


def _check_assertion(engine: Engine, assertion: dict, results: list[StepResult]) -> dict:
    kind = assertion["kind"]
    args = _resolve(assertion.get("args", {}), results)
    expected = _resolve(assertion.get("expected"), results)
    if kind == "LedgerCount":
        actual = len(engine.ledger)
    elif kind == "TokenBalance":
        actual = engine.balance(args["actor"], args["token_type"])
    elif kind == "CaseState":
        actual = engine.case_report(args["case_id"])["state"]
    else:  # ChainValid
        actual = engine.verify_chain()["ok"]
        if expected is None:
            expected = True
    return {"kind": kind, "args": args, "expected": expected, "actual": actual, "ok": actual == expected}
