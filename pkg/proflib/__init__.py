import enum


class CLOCK_MODE(enum.Enum):
    REAL = 'real'
    VIRTUAL = 'virtual'


class STEP(enum.IntEnum):
    LOCAL = 0
    INTERACTIVE = 1
    FINISH = 2
    COMM = 3


# virtual-clock cost units
COST_LOCAL_ARITH = 1
COST_LOCAL_BOOL_WORD = 0.25
COST_INTERACTIVE_PREPARE = 2
COST_LAYER_FINISH = 3
UNIT_MS = 0.001
DEFAULT_LATENCY_MS = 0.1

# weak-node slowdown used by the node presets (local gates ran ~3.2x slower on the weak node)
WEAK_NODE_FACTOR = 3.0

# StepTimings field, table row label (arithmetic), table row label (Boolean)
CELLS = (
    ('local_gates_ms', 'Arithmetic local gates(ms)', 'Boolean local gates(ms)'),
    ('interactive_gate_ms', 'Interactive gate(ms)', 'Interactive gate(ms)'),
    ('layer_finish_ms', 'Layer finish(ms)', 'Layer finish(ms)'),
    ('communication_ms', 'Communication(ms)', 'Communication(ms)'),
    ('online_phase_ms', 'Online phase(ms)', 'Online phase(ms)'),
)
CELL_NAMES = tuple(c[0] for c in CELLS)

SWEEP_HEADER = ('size', 'party0_comm_ms', 'party1_comm_ms', 'party0_online_ms', 'party1_online_ms')
PARTIAL_MARKER = '# PARTIAL'
