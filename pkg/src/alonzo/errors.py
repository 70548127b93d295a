"""Exception hierarchy shared by every layer of the toolkit."""


class AlonzoError(Exception):
    """Base class for all toolkit errors."""


class TypeError_(AlonzoError):
    """An expression or hole filling is ill-typed."""


# Exported under the natural name; the trailing underscore avoids
# shadowing the builtin inside this module.
TypeError = TypeError_


class ResolveError(AlonzoError):
    """A symbol could not be resolved in the current language."""


class AmbiguityError(AlonzoError):
    """A symbol or type parameter is not determined by its context."""


class ParseError(AlonzoError):
    def __init__(self, message, line=0, col=0):
        super().__init__(f"{line}:{col}: {message}")
        self.message = message
        self.line = line
        self.col = col


class DuplicateName(AlonzoError):
    pass


class BudgetExceeded(AlonzoError):
    def __init__(self, what, size, budget):
        super().__init__(f"domain of {what} has {size} elements (budget {budget})")
        self.what = what
        self.size = size
        self.budget = budget


class ClashError(AlonzoError):
    pass


class MissingDependency(AlonzoError):
    def __init__(self, names):
        names = sorted(set(names))
        super().__init__("untransported constants: " + ", ".join(names))
        self.names = names


class MorphismRejected(AlonzoError):
    def __init__(self, translation, failures):
        lines = [f"{o.kind} {o.origin}: {o.status}" for o in failures]
        super().__init__(f"{translation} is not certified:\n  " + "\n  ".join(lines))
        self.translation = translation
        self.failures = failures


class NotFinitelyCheckable(AlonzoError):
    """The theory has opaque axioms or definitions, so its models cannot
    be enumerated."""
