"""Exception types shared across the semlock package."""


class SemlockError(Exception):
    """Base class for all semlock errors."""


# --- password model ---

class InvalidMove(SemlockError):
    """A move drags an icon onto itself."""


class ParseError(SemlockError):
    """A canonical password string is malformed."""

    def __init__(self, offset: int, message: str):
        super().__init__(f"offset {offset}: {message}")
        self.offset = offset


class UnknownIcon(SemlockError):
    """An icon id is not part of the configured icon set."""


class InvalidSide(SemlockError):
    """A side code is not one of L, T, R, B."""


class SpaceTooLarge(SemlockError):
    """Enumerating or ranking the password space would exceed the cap."""


# --- lock engine ---

class DragInProgress(SemlockError):
    """begin_drag while another drag is active."""


class NoActiveDrag(SemlockError):
    """update_drag/end_drag without an active drag."""


class EmptyAttempt(SemlockError):
    """capture with no committed moves."""


class PlacementError(SemlockError):
    """A committed move sequence is geometrically infeasible on the grid."""


# --- credential store ---

class PolicyViolation(SemlockError):
    """Password does not meet the enrollment policy."""


class DuplicateUser(SemlockError):
    """User already enrolled."""


class UnknownUser(SemlockError):
    """User not enrolled."""


# --- corpus io ---

class IoFailure(SemlockError):
    """Corpus file could not be read or written."""


class MalformedLine(SemlockError):
    """A corpus line is not valid JSON (fatal in strict mode)."""


class InvalidProfile(SemlockError):
    """Synthesis profile has non-positive or non-finite weights."""


# --- icon analysis ---

class SubsetTooLarge(SemlockError):
    """Exact subset search would enumerate more than the cap."""


class KTooLarge(SemlockError):
    """Requested subset size exceeds the number of icons."""


class DegenerateInput(SemlockError):
    """Uniformity test needs at least two categories and one observation."""


# --- strength analytics ---

class UnknownToken(SemlockError):
    """Token not in the model alphabet."""


class EmptyCorpus(SemlockError):
    """Model training needs a nonempty corpus."""


class AlphaUnreachable(SemlockError):
    """Distribution's total probability cannot cover the requested alpha."""


class EmptyInput(SemlockError):
    """Aggregation over an empty record list."""
