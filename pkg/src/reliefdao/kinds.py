"""Mapping from engine operations to catalogued transaction kinds.

The catalog is a closed vocabulary, so every internal event must borrow the
closest catalogued kind. Only role onboarding/offboarding and response-team
coordination have dedicated rows; everything else is an artifact mapping.
Payload ``event`` fields disambiguate operations that share a kind.
"""

# identity lifecycle (challenge sets, responses, decisions)
IDENTITY = ("RolesManager", 3)  # Role Request

# roles lifecycle
ROLE_CREATION = ("RolesManager", 1)
ROLE_REMOVAL = ("RolesManager", 2)
ROLE_STATUS_UPDATE = ("RolesManager", 8)  # terminate-for-cause, token status moves
REWARD = ("RolesManager", 7)  # AI Agent Interaction (reward-support verdict)

# tokens (standalone mint/transfer; composite ops record under their own kind)
TOKEN_EVENT = ("RolesManager", 8)

# governance
GOVERNANCE = ("Preventer", 10)  # Resource request and collaboration

# casework
CASE_REPORTED = ("HelpActivator", 6)       # Information sharing (AI diagnoser)
CASE_RECORDED = ("AidProvider", 9)         # Victim information sharing
CASE_LEGAL_CONTRACT = ("AidProvider", 16)  # Legal resources
TEAM_LEGAL = ("AidProvider", 10)           # Legal assistance coordination
TEAM_PSYCH = ("AidProvider", 11)           # Psychological support coordination
CASE_PROCEEDINGS = ("HelpActivator", 12)   # Law enforcement cooperation
CASE_RESOLVED = ("AidProvider", 12)        # Legal insights
CASE_FEEDBACK = ("Preventer", 3)           # Feedback on user experiences
CASE_CLOSED = ("AidProvider", 5)           # Victim support coordination
CASE_FINANCIAL = ("AidProvider", 15)       # Financial guidance
CASE_COUNSELING = ("AidProvider", 6)       # Emotional and psychological support
CASE_PROGRESS = ("AidProvider", 7)         # Real-time information for response
EVIDENCE = ("AidProvider", 13)             # Sextortion case analysis
