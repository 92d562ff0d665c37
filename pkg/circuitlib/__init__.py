import enum


class GATE_KIND(enum.IntEnum):
    INPUT_P0 = 0
    INPUT_P1 = 1
    CONST_ZERO = 2
    CONST_ONE = 3
    ADD = 4
    MUL = 5
    XOR = 6
    AND = 7
    NOT = 8
    OUTPUT = 9

    @property
    def interactive(self) -> bool:
        return self in INTERACTIVE_KINDS

    @property
    def local(self) -> bool:
        return self not in INTERACTIVE_KINDS


INTERACTIVE_KINDS = frozenset({GATE_KIND.MUL, GATE_KIND.AND, GATE_KIND.OUTPUT})
INPUT_KINDS = (GATE_KIND.INPUT_P0, GATE_KIND.INPUT_P1)
ARITH_ONLY_KINDS = frozenset({GATE_KIND.ADD, GATE_KIND.MUL})
BOOL_ONLY_KINDS = frozenset({GATE_KIND.XOR, GATE_KIND.AND, GATE_KIND.NOT,
                             GATE_KIND.CONST_ZERO, GATE_KIND.CONST_ONE})

# number of inputs per kind
ARITY = {
    GATE_KIND.INPUT_P0: 0,
    GATE_KIND.INPUT_P1: 0,
    GATE_KIND.CONST_ZERO: 0,
    GATE_KIND.CONST_ONE: 0,
    GATE_KIND.ADD: 2,
    GATE_KIND.MUL: 2,
    GATE_KIND.XOR: 2,
    GATE_KIND.AND: 2,
    GATE_KIND.NOT: 1,
    GATE_KIND.OUTPUT: 1,
}


class VARIANT(enum.IntEnum):
    NONE = 0
    RIPPLE = 1
    TREE = 2


class APP(enum.IntEnum):
    INNERPRODUCT = 1
    MILLIONAIRE = 2
