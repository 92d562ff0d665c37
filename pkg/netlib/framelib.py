from dataclasses import astuple, dataclass
from typing import Optional, Tuple

import numpy as np

from loglib.loglib import loglib
from misclib.errlib import HandshakeError, ProtocolError
from netlib import FRAME_HEADER, HELLO_FIELDS, HELLO_LAYOUT, MAX_PAYLOAD, MSG_TYPE, PROTOCOL_VERSION
from sharelib import WORLD
from sharelib.bitlib import bitlib
from sharelib.ringlib import RingSpec, ringlib
from sharelib.rnglib import hash64


@dataclass(frozen=True)
class Frame:
    msg_type: MSG_TYPE
    layer_id: int = 0
    payload: bytes = b''

    @property
    def length(self) -> int:
        return len(self.payload)

    def encode(self) -> bytes:
        return FRAME_HEADER.pack(self.length, int(self.msg_type), self.layer_id) + self.payload


@dataclass(frozen=True)
class HelloParams:
    version: int
    app: int
    world: int
    bitlen: int
    size: int
    variant: int
    seed: int

    @staticmethod
    def commit(seed: int) -> int:
        # peers compare seeds without echoing them on the wire
        return hash64(seed, 'hello/seed-commitment')


class framelib:
    slogger = loglib(__name__)

    # region [frame]
    @staticmethod
    def decode_header(header: bytes) -> Tuple[int, MSG_TYPE, int]:
        """
        Parse the 9-byte frame header.

        Returns
        -------
        tuple
            (payload length, msg type, layer id)
        """

        if len(header) != FRAME_HEADER.size:
            raise ProtocolError(f'short frame header: {len(header)} bytes')
        length, raw_type, layer_id = FRAME_HEADER.unpack(header)
        try:
            msg_type = MSG_TYPE(raw_type)
        except ValueError:
            raise ProtocolError(f'unknown msg_type 0x{raw_type:02x}') from None
        if length > MAX_PAYLOAD:
            raise ProtocolError(f'payload length {length} exceeds {MAX_PAYLOAD}')
        return length, msg_type, layer_id

    @staticmethod
    def decode_frame(raw: bytes) -> Frame:
        length, msg_type, layer_id = framelib.decode_header(raw[:FRAME_HEADER.size])
        payload = raw[FRAME_HEADER.size:]
        if len(payload) != length:
            raise ProtocolError(f'frame announces {length} payload bytes, carries {len(payload)}')
        return Frame(msg_type, layer_id, bytes(payload))

    @staticmethod
    def expect(frame: Frame, msg_type: MSG_TYPE, layer_id: Optional[int] = None) -> Frame:
        if frame.msg_type != msg_type:
            raise ProtocolError(f'expected {msg_type.name}, got {frame.msg_type.name}')
        if layer_id is not None and frame.layer_id != layer_id:
            raise ProtocolError(f'expected layer {layer_id}, got layer {frame.layer_id}')
        return frame

    # endregion [frame]

    # region [hello]
    @staticmethod
    def hello_frame(params: HelloParams) -> Frame:
        return Frame(MSG_TYPE.HELLO, 0, HELLO_LAYOUT.pack(*astuple(params)))

    @staticmethod
    def parse_hello(frame: Frame) -> HelloParams:
        framelib.expect(frame, MSG_TYPE.HELLO)
        if frame.length != HELLO_LAYOUT.size:
            raise ProtocolError(f'HELLO payload is {frame.length} bytes, expected {HELLO_LAYOUT.size}')
        return HelloParams(*HELLO_LAYOUT.unpack(frame.payload))

    @staticmethod
    def negotiate(ours: HelloParams, theirs: HelloParams) -> HelloParams:
        """
        Both sides must agree on every field; the first difference aborts.
        """
        for name, mine, peer in zip(HELLO_FIELDS, astuple(ours), astuple(theirs)):
            if mine != peer:
                raise HandshakeError(name, mine, peer)
        if ours.version != PROTOCOL_VERSION:
            raise HandshakeError('version', PROTOCOL_VERSION, ours.version)
        return ours

    # endregion [hello]

    # region [payload]
    @staticmethod
    def encode_values(values: np.ndarray, world: WORLD, spec: Optional[RingSpec]) -> bytes:
        if world == WORLD.ARITHMETIC:
            return ringlib.encode(values, spec)
        return bitlib.pack(values).tobytes()

    @staticmethod
    def decode_values(buf: bytes, count: int, world: WORLD, spec: Optional[RingSpec]) -> np.ndarray:
        if world == WORLD.ARITHMETIC:
            expected = count * spec.byte_width
        else:
            expected = bitlib.nbytes(count)
        if len(buf) != expected:
            raise ProtocolError(f'payload is {len(buf)} bytes, schedule expects {expected}')
        if world == WORLD.ARITHMETIC:
            return ringlib.decode(buf, spec)
        return bitlib.unpack(np.frombuffer(buf, dtype=np.uint8), count)

    @staticmethod
    def encode_layer_payload(d: np.ndarray, e: np.ndarray, outputs: np.ndarray,
                             world: WORLD, spec: Optional[RingSpec] = None) -> bytes:
        """
        Serialize one layer's interactive data.

        Parameters
        ----------
        d, e : np.ndarray
            masked differences of the layer's MUL/AND gates, gate id ascending
        outputs : np.ndarray
            own shares of the layer's OUTPUT gates, gate id ascending
        world : WORLD
            arithmetic values go out as byte_width little-endian words, Boolean
            values as packed bits, both in the order d0 e0 d1 e1 ... out0 out1 ...

        Returns
        -------
        bytes
            payload of one LAYER_DATA frame
        """

        dtype = np.uint64 if world == WORLD.ARITHMETIC else np.uint8
        interleaved = np.empty(2 * len(d), dtype=dtype)
        interleaved[0::2] = d
        interleaved[1::2] = e
        values = np.concatenate([interleaved, np.asarray(outputs, dtype=dtype)])
        return framelib.encode_values(values, world, spec)

    @staticmethod
    def decode_layer_payload(buf: bytes, n_pairs: int, n_outputs: int,
                             world: WORLD, spec: Optional[RingSpec] = None) -> Tuple[np.ndarray, np.ndarray, np.ndarray]:
        values = framelib.decode_values(buf, 2 * n_pairs + n_outputs, world, spec)
        pairs = values[:2 * n_pairs]
        return pairs[0::2], pairs[1::2], values[2 * n_pairs:]

    # endregion [payload]
