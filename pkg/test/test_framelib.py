import numpy as np
import pytest

from misclib.errlib import HandshakeError, ProtocolError
from netlib import FRAME_HEADER, HELLO_LAYOUT, MSG_TYPE, PROTOCOL_VERSION
from netlib.framelib import Frame, HelloParams, framelib
from sharelib import WORLD
from sharelib.ringlib import RingSpec


def hello(**kw):
    fields = dict(version=PROTOCOL_VERSION, app=1, world=0, bitlen=16, size=128, variant=0,
                  seed=HelloParams.commit(1))
    fields.update(kw)
    return HelloParams(**fields)


class Test_framelib:
    # region [frame]
    def test_header_layout(self):
        raw = Frame(MSG_TYPE.LAYER_DATA, 3, b'\xaa\xbb').encode()
        assert raw == b'\x02\x00\x00\x00' + b'\x03' + b'\x03\x00\x00\x00' + b'\xaa\xbb'
        assert FRAME_HEADER.size == 9

    def test_decode_frame(self):
        frame = framelib.decode_frame(Frame(MSG_TYPE.DONE, 0).encode())
        assert frame == Frame(MSG_TYPE.DONE, 0, b'')

    def test_unknown_type(self):
        with pytest.raises(ProtocolError):
            framelib.decode_header(b'\x00\x00\x00\x00\x63\x00\x00\x00\x00')

    def test_short_header(self):
        with pytest.raises(ProtocolError):
            framelib.decode_header(b'\x00\x00')

    def test_payload_length_mismatch(self):
        raw = Frame(MSG_TYPE.LAYER_DATA, 1, b'\x01\x02').encode()
        with pytest.raises(ProtocolError):
            framelib.decode_frame(raw[:-1])

    def test_expect(self):
        frame = Frame(MSG_TYPE.LAYER_DATA, 2, b'')
        assert framelib.expect(frame, MSG_TYPE.LAYER_DATA, 2) is frame
        with pytest.raises(ProtocolError):
            framelib.expect(frame, MSG_TYPE.LAYER_DATA, 3)
        with pytest.raises(ProtocolError):
            framelib.expect(frame, MSG_TYPE.DONE)

    # endregion [frame]

    # region [hello]
    def test_hello_frame(self):
        frame = framelib.hello_frame(hello())
        assert frame.msg_type == MSG_TYPE.HELLO
        assert frame.length == HELLO_LAYOUT.size
        assert framelib.parse_hello(frame) == hello()

    def test_hello_hides_seed(self):
        assert hello().seed != 1
        assert HelloParams.commit(1) != HelloParams.commit(2)

    def test_negotiate_ok(self):
        assert framelib.negotiate(hello(), hello()) == hello()

    @pytest.mark.parametrize('field, value', [('bitlen', 32), ('size', 64), ('app', 2), ('seed', 5)])
    def test_negotiate_names_field(self, field, value):
        with pytest.raises(HandshakeError) as e:
            framelib.negotiate(hello(), hello(**{field: value}))
        assert e.value.field == field
        assert field in str(e.value)

    def test_negotiate_version(self):
        with pytest.raises(HandshakeError) as e:
            framelib.negotiate(hello(version=9), hello(version=9))
        assert e.value.field == 'version'

    def test_parse_hello_wrong_size(self):
        with pytest.raises(ProtocolError):
            framelib.parse_hello(Frame(MSG_TYPE.HELLO, 0, b'\x01'))

    # endregion [hello]

    # region [payload]
    def test_arith_layer_payload_order(self):
        spec = RingSpec(16)
        d = np.array([1, 2], dtype=np.uint64)
        e = np.array([3, 4], dtype=np.uint64)
        out = np.array([0x0102], dtype=np.uint64)
        buf = framelib.encode_layer_payload(d, e, out, WORLD.ARITHMETIC, spec)
        assert buf == bytes([1, 0, 3, 0, 2, 0, 4, 0, 2, 1])
        d2, e2, out2 = framelib.decode_layer_payload(buf, 2, 1, WORLD.ARITHMETIC, spec)
        assert d2.tolist() == [1, 2] and e2.tolist() == [3, 4] and out2.tolist() == [0x0102]

    def test_bool_layer_payload_packed(self):
        d = np.array([1, 0, 1], dtype=np.uint8)
        e = np.array([0, 1, 1], dtype=np.uint8)
        out = np.array([1], dtype=np.uint8)
        buf = framelib.encode_layer_payload(d, e, out, WORLD.BOOLEAN)
        # d0 e0 d1 e1 d2 e2 out0 = 1 0 0 1 1 1 1 -> 0b01111001
        assert buf == bytes([0b01111001])
        d2, e2, out2 = framelib.decode_layer_payload(buf, 3, 1, WORLD.BOOLEAN)
        assert d2.tolist() == [1, 0, 1] and e2.tolist() == [0, 1, 1] and out2.tolist() == [1]

    def test_payload_size_checked(self):
        with pytest.raises(ProtocolError):
            framelib.decode_layer_payload(b'\x00' * 7, 2, 0, WORLD.ARITHMETIC, RingSpec(16))
        with pytest.raises(ProtocolError):
            framelib.decode_layer_payload(b'\x00\x00', 3, 1, WORLD.BOOLEAN)

    def test_empty_layer_payload(self):
        empty = np.zeros(0, dtype=np.uint64)
        assert framelib.encode_layer_payload(empty, empty, empty, WORLD.ARITHMETIC, RingSpec(16)) == b''

    # endregion [payload]
