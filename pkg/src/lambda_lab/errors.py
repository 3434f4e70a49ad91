"""Exception hierarchy shared by every module."""


class LambdaLabError(Exception):
    """Base class for all package errors."""


class InvalidSizeError(LambdaLabError, ValueError):
    """A factor size or graph size is outside the allowed range."""


class VertexRangeError(LambdaLabError, IndexError):
    """A vertex id does not belong to the graph."""


class MissingLabelError(LambdaLabError, ValueError):
    """A labeling does not cover every vertex."""

    def __init__(self, unlabeled):
        self.unlabeled = list(unlabeled)
        shown = ", ".join(map(str, self.unlabeled[:20]))
        more = "" if len(self.unlabeled) <= 20 else f", ... ({len(self.unlabeled)} total)"
        super().__init__(f"unlabeled vertices: {shown}{more}")


class UnsupportedRegimeError(LambdaLabError, ValueError):
    """A closed-form result was asked for outside the regime it is proved in."""


class OutOfRegimeError(LambdaLabError, ValueError):
    """A construction scheme does not apply to the requested instance."""


class ResourceLimitError(LambdaLabError):
    """Search stopped on a node or time limit.

    Carries the best bounds known at the time: ``lower`` is certified (every
    span below it was refuted), ``upper`` is the span of ``witness`` if one was
    found.
    """

    def __init__(self, lower, upper=None, witness=None, nodes=0):
        self.lower = lower
        self.upper = upper
        self.witness = witness
        self.nodes = nodes
        hi = "?" if upper is None else upper
        super().__init__(f"search limit reached; lambda in [{lower}, {hi}]")


class InfeasibleError(LambdaLabError):
    """Exhaustive search proved no labeling exists within ``span``."""

    def __init__(self, span, nodes=0, detail=""):
        self.span = span
        self.nodes = nodes
        msg = f"no labeling with span <= {span} exists ({nodes} nodes searched)"
        super().__init__(f"{msg}: {detail}" if detail else msg)


class DataIntegrityError(LambdaLabError):
    """A shipped or cached data file is missing or malformed."""


class SeamViolationError(LambdaLabError):
    """Gluing two tiles produced an invalid labeling."""

    def __init__(self, violations):
        self.violations = list(violations)
        super().__init__(f"{len(self.violations)} violation(s) across the seam, first: {self.violations[0]}")


class KeyParseError(LambdaLabError, ValueError):
    """An instance key string does not match the grammar."""
