import enum
import struct

PROTOCOL_VERSION = 1

# length u32, msg_type u8, layer_id u32, little-endian
FRAME_HEADER = struct.Struct('<IBI')
# version u16, app u8, world u8, l u16, size u64, variant u8, seed u64
HELLO_LAYOUT = struct.Struct('<HBBHQBQ')
HELLO_FIELDS = ('version', 'app', 'world', 'bitlen', 'size', 'variant', 'seed')

MAX_PAYLOAD = 1 << 31
DEFAULT_PORT = 7766
CONNECT_RETRY_S = 0.05


class MSG_TYPE(enum.IntEnum):
    HELLO = 0x01
    INPUT_SHARE = 0x02
    LAYER_DATA = 0x03
    OUTPUT_SHARE = 0x04
    DONE = 0x05
