class TorclosedError(Exception):
    pass


class CycleError(TorclosedError):
    def __init__(self, cycle):
        self.cycle = tuple(cycle)
        super().__init__(f"relation is not antisymmetric, elements {list(self.cycle)} lie on a cycle")


class NotComparable(TorclosedError):
    def __init__(self, x, y):
        self.pair = (x, y)
        super().__init__(f"elements {x} and {y} are not comparable (expected {x} <= {y})")


class NotALattice(TorclosedError):
    def __init__(self, pair, reason):
        self.pair = tuple(pair)
        self.reason = reason
        super().__init__(f"not a lattice: {pair[0]} and {pair[1]} have no {reason}")


class NotConvex(TorclosedError):
    def __init__(self, members, witness):
        self.members = members
        self.witness = tuple(witness)
        a, b, c = self.witness
        super().__init__(f"subset is not convex: {a} <= {b} <= {c} with {a}, {c} inside and {b} outside")


class SearchExhausted(TorclosedError):
    pass


class UnsupportedLength(TorclosedError):
    def __init__(self, n):
        self.n = n
        super().__init__(f"closed-form count only known for chains with at most 3 elements, got {n}")


class InvalidKupisch(TorclosedError):
    def __init__(self, sequence, reason):
        self.sequence = tuple(sequence)
        super().__init__(f"invalid sequence {list(self.sequence)}: {reason}")


class PreconditionViolated(TorclosedError):
    pass


class NotationUnresolved(TorclosedError):
    def __init__(self, name, lower, upper):
        self.name = name
        self.endpoints = (lower, upper)
        super().__init__(f"interval {name} = [{lower}, {upper}] has incomparable endpoints")


class InvalidDocument(TorclosedError):
    pass


class PropertyViolation(TorclosedError):
    def __init__(self, prop, witness=None):
        self.prop = prop
        self.witness = witness
        msg = f"property '{prop}' does not hold"
        if witness is not None:
            msg += f", witness: {witness}"
        super().__init__(msg)


class ParseError(TorclosedError):
    pass
