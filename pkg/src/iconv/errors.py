"""Exception hierarchy.

Every error raised by the library derives from :class:`IconvError`; the CLI maps
:class:`InputError` subclasses to exit status 2.
"""

from __future__ import annotations


class IconvError(Exception):
    """Base class for all library errors."""


class InputError(IconvError):
    """Malformed or inconsistent input (exit status 2 at the CLI)."""


class AxiomViolation(InputError):
    def __init__(self, violations):
        self.violations = list(violations)
        super().__init__("; ".join(str(v) for v in self.violations))


class DuplicatePoint(InputError):
    pass


class UnknownPoint(InputError):
    pass


class UnknownElement(InputError):
    pass


class MissingEmptySet(InputError):
    pass


class NotDownwardClosed(InputError):
    def __init__(self, member, subset):
        self.witness = (member, subset)
        super().__init__(f"{subset} is a subset of member {member} but not a member")


class NotUnionClosed(InputError):
    def __init__(self, left, right):
        self.witness = (left, right)
        super().__init__(f"union of {left} and {right} is not a member")


class NotUpwardClosed(InputError):
    pass


class NotIntersectionClosed(InputError):
    pass


class TrivialIdeal(InputError):
    pass


class GroundTooLarge(InputError):
    pass


class GroundMismatch(InputError):
    pass


class NotReflexive(InputError):
    def __init__(self, m):
        self.witness = (m,)
        super().__init__(f"{m} >= {m} does not hold")


class NotTransitive(InputError):
    def __init__(self, m, n, p):
        self.witness = (m, n, p)
        super().__init__(f"{m} >= {n} and {n} >= {p} but not {m} >= {p}")


class NoUpperBound(InputError):
    def __init__(self, m, n):
        self.witness = (m, n)
        super().__init__(f"{m} and {n} have no common upper bound")


class TooLarge(InputError):
    pass


class SpaceTooLarge(TooLarge):
    pass


class PositionOutOfRange(InputError):
    pass


class FiniteSelection(InputError):
    pass


class NotSubnet(InputError):
    def __init__(self, m):
        self.witness = m
        super().__init__(f"no tail of the subnet maps above {m}")


class NotDAdmissible(InputError):
    pass


class DegenerateInducedIdeal(IconvError):
    pass


class DegenerateI0(IconvError):
    pass


class ActuallyConvergent(IconvError):
    pass


class NotAClosureOperator(IconvError):
    pass


class PreconditionsNotMet(IconvError):
    pass


class UnknownTarget(InputError):
    pass


class WorkspaceSyntaxError(InputError):
    def __init__(self, line: int, message: str):
        self.line = line
        super().__init__(f"line {line}: {message}")


class UnknownReference(InputError):
    def __init__(self, name: str, line: int | None = None):
        self.name = name
        self.line = line
        where = f"line {line}: " if line is not None else ""
        super().__init__(f"{where}unknown reference {name!r}")


class ValidationError(InputError):
    def __init__(self, obj: str, axiom: str, line: int | None = None):
        self.obj = obj
        self.axiom = axiom
        self.line = line
        where = f"line {line}: " if line is not None else ""
        super().__init__(f"{where}{obj}: {axiom}")
