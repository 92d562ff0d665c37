POOL_MAGIC = 'TRIP'
POOL_VERSION = 'v1'
# Boolean pool records are one packed 64-bit word per a, b and c
BOOL_WORD_BITS = 64
