from circuitlib import APP, VARIANT

APPS = {
    'innerproduct': APP.INNERPRODUCT,
    'millionaire': APP.MILLIONAIRE,
}
VARIANTS = {
    'ripple': VARIANT.RIPPLE,
    'tree': VARIANT.TREE,
}
ROLES = ('0', '1', 'loopback')
NODE_PRESETS = ('strong', 'weak', 'hetero')
POOL_MODES = ('regen', 'shared')

# small input sizes of the two applications (2^7 elements, 2^5 bits)
DEFAULT_SIZE = {
    'innerproduct': 1 << 7,
    'millionaire': 1 << 5,
}
DEFAULT_REPS = 10
DEFAULT_SEED = 1
DEFAULT_TIMEOUT_S = 30.0

# ripple circuits deeper than this get a round-count warning
RIPPLE_WARN_ROUNDS = 1024

EXIT_OK = 0
EXIT_FAIL = 1
EXIT_USAGE = 2
