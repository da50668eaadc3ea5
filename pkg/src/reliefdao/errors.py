"""Error types shared across the engine.

Every error carries an ``error_code`` equal to its class name; the HTTP
layer and the scenario runner surface that code verbatim, so renaming a
class is a wire-format change.
"""


class DaoError(Exception):
    """Base class for all engine errors."""

    @property
    def error_code(self) -> str:
        return type(self).__name__


# ledger
class UnknownKind(DaoError):
    pass


class LedgerSealed(DaoError):
    pass


# tokens
class ZeroAmount(DaoError):
    pass


class DuplicateContent(DaoError):
    pass


class InsufficientBalance(DaoError):
    pass


class NotOwner(DaoError):
    pass


class SoulboundViolation(DaoError):
    pass


class UnknownAsset(DaoError):
    pass


# identity
class EmptySet(DaoError):
    pass


class BadPolicy(DaoError):
    pass


class UnknownSet(DaoError):
    pass


class UnknownSession(DaoError):
    pass


class SessionClosed(DaoError):
    pass


class UnknownChallenge(DaoError):
    pass


# roles
class UnknownRole(DaoError):
    pass


class UnknownAssignment(DaoError):
    pass


class AuthRequired(DaoError):
    pass


class OracleRejected(DaoError):
    pass


class NotActive(DaoError):
    pass


class UnauthorizedReporter(DaoError):
    pass


class ZeroWeight(DaoError):
    pass


# governance
class NoGovernanceTokens(DaoError):
    pass


class UnknownProposal(DaoError):
    pass


class NotOpen(DaoError):
    pass


class NotEligible(DaoError):
    pass


class AlreadyVoted(DaoError):
    pass


class StillOpen(DaoError):
    pass


class NotAccepted(DaoError):
    pass


class AlreadyExecuted(DaoError):
    pass


# casework
class UnknownActor(DaoError):
    pass


class UnknownCase(DaoError):
    pass


class IllegalTransition(DaoError):
    pass


class WrongState(DaoError):
    pass


class NoPsychologistAvailable(DaoError):
    pass


class NoLegalAidAvailable(DaoError):
    pass


# agents
class BadAnswerCount(DaoError):
    pass


class OutOfRange(DaoError):
    pass


# gateway
class MalformedScript(DaoError):
    pass


class AssertionFailed(DaoError):
    def __init__(self, message: str, step_index: int | None = None):
        super().__init__(message)
        self.step_index = step_index


class PortInUse(DaoError):
    pass


class BadConfig(DaoError):
    pass


class NonEmptyEngine(DaoError):
    pass


class CorruptSnapshot(DaoError):
    pass
