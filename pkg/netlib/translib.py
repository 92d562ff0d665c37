import socket
import threading
import time
from collections import Counter, deque
from fractions import Fraction
from typing import List, Optional, Tuple, Union

from loglib.loglib import loglib
from misclib.errlib import PeerConnectionError
from netlib import CONNECT_RETRY_S, FRAME_HEADER
from netlib.framelib import Frame, framelib

# ready time riding beside a frame in loopback mode, never on the wire:
# virtual ms, or the monotonic send time in ns on the real clock
Stamp = Optional[Union[Fraction, int]]


class Transport:
    """
    Blocking, ordered, reliable frame channel.

    With record=True every sent frame is appended to `transcript` as its exact
    wire bytes, so two runs can be compared byte for byte.
    """

    def __init__(self, name: str, record: bool = False):
        self.name = name
        self.logger = loglib(f'{__name__}_{name}')
        self.transcript: List[bytes] = []
        self.frames_sent = Counter()
        self.bytes_sent = Counter()
        self.record = record

    def send(self, frame: Frame, stamp: Stamp = None):
        raw = frame.encode()
        if self.record:
            self.transcript.append(raw)
        self.frames_sent[frame.msg_type] += 1
        self.bytes_sent[frame.msg_type] += frame.length
        self._send_raw(raw, stamp)

    def receive(self) -> Tuple[Frame, Stamp]:
        raise NotImplementedError

    def close(self):
        raise NotImplementedError

    def _send_raw(self, raw: bytes, stamp: Stamp):
        raise NotImplementedError

    def reset_stats(self):
        self.transcript.clear()
        self.frames_sent.clear()
        self.bytes_sent.clear()

    # region [with]
    def __enter__(self):
        return self

    def __exit__(self, exc_type, exc_value, traceback):
        self.close()

    # endregion [with]


class MemoryChannel:
    """
    One direction of an in-memory link: single producer, single consumer.
    """

    def __init__(self):
        self.buf = deque()
        self.cond = threading.Condition()
        self.closed = False

    def put(self, item):
        with self.cond:
            if self.closed:
                raise PeerConnectionError('in-memory channel is closed')
            self.buf.append(item)
            self.cond.notify()

    def get(self, timeout: Optional[float] = None):
        with self.cond:
            if not self.cond.wait_for(lambda: self.buf or self.closed, timeout=timeout):
                raise PeerConnectionError(f'no frame within {timeout} s')
            if self.buf:
                return self.buf.popleft()
            raise PeerConnectionError('peer closed the in-memory channel')

    def close(self):
        with self.cond:
            self.closed = True
            self.cond.notify_all()


class MemoryTransport(Transport):
    def __init__(self, name: str, outbox: MemoryChannel, inbox: MemoryChannel, timeout: Optional[float] = None,
                 record: bool = False):
        super().__init__(name, record)
        self.outbox = outbox
        self.inbox = inbox
        self.timeout = timeout

    def _send_raw(self, raw: bytes, stamp: Stamp):
        self.outbox.put((raw, stamp))

    def receive(self) -> Tuple[Frame, Stamp]:
        raw, stamp = self.inbox.get(self.timeout)
        return framelib.decode_frame(raw), stamp

    def close(self):
        self.outbox.close()
        self.inbox.close()


class TcpTransport(Transport):
    """
    One TCP connection; party 1 listens, party 0 connects. No virtual stamps.
    """

    def __init__(self, name: str, sock: socket.socket):
        super().__init__(name)
        self.sock = sock
        self.sock.setsockopt(socket.IPPROTO_TCP, socket.TCP_NODELAY, 1)

    def _send_raw(self, raw: bytes, stamp: Stamp):
        try:
            self.sock.sendall(raw)
        except OSError as e:
            raise PeerConnectionError(f'send failed: {e}') from e

    def receive(self) -> Tuple[Frame, Stamp]:
        length, msg_type, layer_id = framelib.decode_header(self._recv_exactly(FRAME_HEADER.size))
        payload = self._recv_exactly(length)
        return Frame(msg_type, layer_id, payload), None

    def _recv_exactly(self, n: int) -> bytes:
        chunks = []
        left = n
        while left:
            try:
                chunk = self.sock.recv(min(left, 1 << 20))
            except OSError as e:
                raise PeerConnectionError(f'receive failed: {e}') from e
            if not chunk:
                raise PeerConnectionError('peer closed the connection')
            chunks.append(chunk)
            left -= len(chunk)
        return b''.join(chunks)

    def close(self):
        try:
            self.sock.close()
        except OSError as e:
            self.logger.w(f'{type(e).__name__}!!! {e}')


class translib:
    slogger = loglib(__name__)

    @staticmethod
    def memory_pair(timeout: Optional[float] = None, record: bool = False) -> Tuple[MemoryTransport, MemoryTransport]:
        """
        Duplex in-memory link for loopback: (party 0 end, party 1 end).
        """
        to_p1, to_p0 = MemoryChannel(), MemoryChannel()
        return (MemoryTransport('mem_p0', to_p1, to_p0, timeout, record),
                MemoryTransport('mem_p1', to_p0, to_p1, timeout, record))

    @staticmethod
    def connect(host: str, port: int, timeout: float = 30.0) -> TcpTransport:
        """
        Party 0 side: retry until the listener is up or timeout expires.
        """
        deadline = time.monotonic() + timeout
        while True:
            try:
                sock = socket.create_connection((host, port), timeout=timeout)
                sock.settimeout(None)
                translib.slogger.i(f'connected to {host}:{port}')
                return TcpTransport('tcp_p0', sock)
            except (ConnectionRefusedError, socket.timeout) as e:
                if time.monotonic() >= deadline:
                    raise PeerConnectionError(f'cannot connect to {host}:{port}: {e}') from e
                time.sleep(CONNECT_RETRY_S)
            except OSError as e:
                raise PeerConnectionError(f'cannot connect to {host}:{port}: {e}') from e

    @staticmethod
    def listen(port: int, host: str = '', timeout: float = 30.0) -> TcpTransport:
        """
        Party 1 side: accept exactly one connection.
        """
        with socket.socket(socket.AF_INET, socket.SOCK_STREAM) as server:
            server.setsockopt(socket.SOL_SOCKET, socket.SO_REUSEADDR, 1)
            try:
                server.bind((host, port))
                server.listen(1)
                server.settimeout(timeout)
                sock, addr = server.accept()
            except socket.timeout as e:
                raise PeerConnectionError(f'no peer connected to port {port} within {timeout} s') from e
            except OSError as e:
                raise PeerConnectionError(f'cannot listen on port {port}: {e}') from e
        sock.settimeout(None)
        translib.slogger.i(f'accepted peer {addr[0]}:{addr[1]}')
        return TcpTransport('tcp_p1', sock)
