import enum

# inner product elements are 16-bit long
DEFAULT_BITLEN = 16
MAX_BITLEN = 64

PARTIES = (0, 1)


class WORLD(enum.IntEnum):
    ARITHMETIC = 0
    BOOLEAN = 1

    @property
    def tag(self):
        return 'A' if self is WORLD.ARITHMETIC else 'B'
