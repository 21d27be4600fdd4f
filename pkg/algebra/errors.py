"""Exception types shared by the algebra package and the command layer."""

from __future__ import annotations


class HrsLabError(Exception):
    """Base class for every error the command layer turns into an exit code."""


class ContextMismatch(HrsLabError, ValueError):
    """Objects from different algebra contexts were combined."""


class NotTilting(HrsLabError):
    """The torsion pair cannot coresolve: some injective is not torsion."""

    def __init__(self, label: str, failing: list[str] | None = None):
        self.label = label
        self.failing = failing or []
        detail = f" (non-torsion injectives: {', '.join(self.failing)})" if self.failing else ""
        super().__init__(f"torsion pair '{label}' is not tilting{detail}")


class NotInHeart(HrsLabError):
    """A complex violates one of the cohomology constraints of the heart."""

    def __init__(self, constraint: str, degree: int, module=None):
        self.constraint = constraint
        self.degree = degree
        self.module = module
        dims = f" dims {list(module.dims)}" if module is not None else ""
        super().__init__(f"not in heart: {constraint} (degree {degree}{dims})")


class NotAComplex(HrsLabError):
    """Consecutive differentials do not compose to zero."""

    def __init__(self, position: int):
        self.position = position
        super().__init__(f"differentials at positions {position} and {position + 1} do not compose to zero")


class SplitFailed(HrsLabError, RuntimeError):
    """The torsion decomposition of a heart object did not split."""


class WorkspaceError(HrsLabError):
    """A workspace file failed to parse or validate.

    ``where`` is either a JSON ``line:column`` position or a dotted key path.
    """

    def __init__(self, message: str, where: str = ""):
        self.where = where
        super().__init__(f"{where}: {message}" if where else message)


class CoverFailed(HrsLabError, RuntimeError):
    """A cover by torsion stalks is not a short exact sequence in the heart."""

    def __init__(self, obj, reason: str):
        self.obj = obj
        super().__init__(f"cover of {obj} failed: {reason}")
