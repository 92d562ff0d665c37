import enum


class FILE_FMT(enum.IntEnum):
    FOLDER = 0
    TRIPLES = FOLDER + 1
    CIRCUIT_DUMP = TRIPLES + 1
    REPORT_JSON = CIRCUIT_DUMP + 1
    REPORT_CSV = REPORT_JSON + 1
    TEXT = REPORT_CSV + 1


# suffix -> format, first match wins
SUFFIX_FMT = {
    '.p0': FILE_FMT.TRIPLES,
    '.p1': FILE_FMT.TRIPLES,
    '.trip': FILE_FMT.TRIPLES,
    '.circ': FILE_FMT.CIRCUIT_DUMP,
    '.json': FILE_FMT.REPORT_JSON,
    '.csv': FILE_FMT.REPORT_CSV,
}
