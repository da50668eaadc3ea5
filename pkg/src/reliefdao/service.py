"""HTTP/JSON surface over the engine.

Every mutating endpoint maps 1:1 onto one engine operation; the service
holds no state of its own. Module errors surface as 4xx bodies of the form
``{"error_code": ..., "message": ...}`` with the error code equal to the
module error name verbatim.
"""

from __future__ import annotations

import errno
from typing import Optional

from fastapi import Body, FastAPI, Request
from fastapi.responses import JSONResponse

from .engine import Engine
from .errors import BadConfig, DaoError, PortInUse

_NOT_FOUND_CODES = {
    "UnknownKind",
    "UnknownCase",
    "UnknownSet",
    "UnknownSession",
    "UnknownChallenge",
    "UnknownRole",
    "UnknownAssignment",
    "UnknownProposal",
    "UnknownActor",
    "UnknownAsset",
}


def create_app(engine: Engine) -> FastAPI:
    app = FastAPI(title="reliefdao gateway", docs_url=None, redoc_url=None)
    app.state.engine = engine

    @app.exception_handler(DaoError)
    async def dao_error_handler(request: Request, err: DaoError):
        status = 404 if err.error_code in _NOT_FOUND_CODES else 400
        return JSONResponse(status_code=status, content={"error_code": err.error_code, "message": str(err)})

    @app.exception_handler(KeyError)
    async def key_error_handler(request: Request, err: KeyError):
        return JSONResponse(status_code=400, content={"error_code": "BadRequest", "message": f"missing field {err}"})

    @app.exception_handler(ValueError)
    async def value_error_handler(request: Request, err: ValueError):
        return JSONResponse(status_code=400, content={"error_code": "BadRequest", "message": str(err)})

    @app.exception_handler(TypeError)
    async def type_error_handler(request: Request, err: TypeError):
        return JSONResponse(status_code=400, content={"error_code": "BadRequest", "message": str(err)})

    # -- health / ledger -----------------------------------------------------

    @app.get("/health")
    def health():
        return {"status": "ok", "ledger_len": len(engine.ledger)}

    @app.get("/catalog")
    def catalog():
        return [engine.catalog_lookup(k.component.value, k.local_id) for k in engine.catalog]

    @app.get("/ledger")
    def ledger_query(
        component: Optional[str] = None,
        actor_id: Optional[str] = None,
        kind_component: Optional[str] = None,
        kind_local_id: Optional[int] = None,
        time_from: Optional[int] = None,
        time_to: Optional[int] = None,
        case_id: Optional[str] = None,
    ):
        kind = (kind_component, kind_local_id) if kind_component and kind_local_id is not None else None
        time_range = (time_from, time_to) if time_from is not None and time_to is not None else None
        return engine.query_ledger(
            component=component, actor_id=actor_id, kind=kind, time_range=time_range, component_id=case_id
        )

    @app.post("/ledger/verify")
    def ledger_verify():
        return engine.verify_chain()

    # -- identity --------------------------------------------------------------

    @app.post("/auth/challenge-sets")
    def create_challenge_set(body: dict = Body(...)):
        return engine.create_challenge_set(
            context=body.get("context", ""), challenges=body["challenges"], policy=body.get("policy", "All")
        )

    @app.post("/auth/sessions")
    def open_session(body: dict = Body(...)):
        return engine.open_session(actor_id=body["actor_id"], set_id=body["set_id"])

    @app.get("/auth/sessions/{session_id}")
    def session_info(session_id: str):
        return engine.session_info(session_id)

    @app.post("/auth/sessions/{session_id}/responses")
    def submit_response(session_id: str, body: dict = Body(...)):
        return engine.submit_response(
            session_id,
            challenge_id=body["challenge_id"],
            response_text=body.get("response_text"),
            response_hex=body.get("response_hex"),
        )

    @app.post("/auth/sessions/{session_id}/evaluate")
    def evaluate(session_id: str):
        return engine.evaluate(session_id)

    # -- roles ---------------------------------------------------------------------

    @app.post("/roles/onboard")
    def onboard(body: dict = Body(...)):
        return engine.onboard(actor_id=body["actor_id"], role_name=body["role_name"])

    @app.post("/roles/offboard")
    def offboard(body: dict = Body(...)):
        return engine.offboard(assignment_id=body["assignment_id"], reason=body.get("reason", ""))

    @app.post("/roles/terminate")
    def terminate(body: dict = Body(...)):
        return engine.terminate_participation(
            assignment_id=body["assignment_id"],
            reporter_role=body["reporter_role"],
            concern=body.get("concern", ""),
        )

    @app.post("/roles/reward")
    def reward(body: dict = Body(...)):
        return engine.reward(assignment_id=body["assignment_id"], kind=body.get("kind", ""), weight=body["weight"])

    @app.get("/roles")
    def roles_overview():
        return engine.roles_overview()

    @app.get("/roles/{role_name}/information")
    def role_information(role_name: str, band: str = "Low"):
        return engine.role_information(role_name, band)

    # -- tokens -----------------------------------------------------------------------

    @app.post("/tokens/mint")
    def mint(body: dict = Body(...)):
        return engine.mint(
            token_type=body["token_type"],
            recipient=body["recipient"],
            amount=body.get("amount"),
            content_hex=body.get("content_hex"),
            label=body.get("label"),
        )

    @app.post("/tokens/transfer")
    def transfer(body: dict = Body(...)):
        return engine.transfer(
            token_type=body["token_type"],
            from_actor=body["from"],
            to_actor=body["to"],
            amount=body.get("amount"),
            asset_id=body.get("asset_id"),
        )

    @app.get("/tokens/{actor}")
    def token_state(actor: str):
        return engine.token_state(actor)

    # -- governance -----------------------------------------------------------------------

    @app.post("/governance/proposals")
    def propose(body: dict = Body(...)):
        return engine.propose(proposer=body["proposer"], kind=body["kind"], payload=body.get("payload", {}))

    @app.get("/governance/proposals")
    def proposals():
        return [engine.proposal_info(pid) for pid in engine.governance.proposals]

    @app.get("/governance/proposals/{proposal_id}")
    def proposal_info(proposal_id: str):
        return engine.proposal_info(proposal_id)

    @app.post("/governance/proposals/{proposal_id}/votes")
    def vote(proposal_id: str, body: dict = Body(...)):
        return engine.vote(proposal_id, voter=body["voter"], choice=body["choice"])

    @app.post("/governance/proposals/{proposal_id}/tally")
    def tally(proposal_id: str, body: dict = Body(default={})):
        return engine.tally(proposal_id, now=body.get("now"))

    @app.post("/governance/proposals/{proposal_id}/execute")
    def execute(proposal_id: str):
        return engine.execute(proposal_id)

    # -- casework ------------------------------------------------------------------------------

    @app.post("/cases")
    def report_incident(body: dict = Body(...)):
        return engine.report_incident(reporter=body["reporter"], details=body.get("details", ""))

    @app.get("/cases")
    def list_cases(reporter: Optional[str] = None):
        return engine.list_cases(reporter=reporter)

    @app.get("/cases/{case_id}")
    def case_report(case_id: str):
        return engine.case_report(case_id)

    @app.post("/cases/{case_id}/events")
    def case_event(case_id: str, body: dict = Body(...)):
        kwargs = {k: v for k, v in body.items() if k != "event"}
        return engine.advance(case_id, body["event"], **kwargs)

    @app.post("/cases/{case_id}/evidence")
    def case_evidence(case_id: str, body: dict = Body(...)):
        content = bytes.fromhex(body["content_hex"]) if "content_hex" in body else body.get("content", "").encode()
        return engine.attach_evidence(case_id, content)

    @app.post("/cases/{case_id}/team")
    def case_team(case_id: str):
        return engine.assemble_response_team(case_id)

    # -- agents ----------------------------------------------------------------------------------

    @app.post("/agents/diagnose/sextortion")
    def diagnose_sextortion(body: dict = Body(...)):
        return engine.diagnose_sextortion(**body)

    @app.post("/agents/diagnose/legal")
    def diagnose_legal(body: dict = Body(...)):
        tag = body.pop("jurisdiction_tag", "generic")
        return engine.diagnose_legal_aid(jurisdiction_tag=tag, **body)

    @app.post("/assessments/mental-health")
    def mental_health(body: dict = Body(...)):
        return engine.score_mental_health_assessment(answers=body["answers"])

    @app.post("/assessments/situation")
    def situation(body: dict = Body(...)):
        return engine.score_situation_assessment(answers=body["answers"])

    return app


def serve(engine: Engine, host: str = "127.0.0.1", port: int = 8710) -> None:
    """Run the gateway until interrupted; raises PortInUse/BadConfig eagerly."""
    import uvicorn

    if not (0 < port < 65536):
        raise BadConfig(f"port {port} out of range")
    app = create_app(engine)
    try:
        uvicorn.run(app, host=host, port=port, log_level="warning")
    except OSError as err:
        if err.errno == errno.EADDRINUSE:
            raise PortInUse(f"port {port} is already bound") from err
        raise
