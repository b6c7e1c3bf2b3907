class Project:
    NAME = "boseq"
    VERSION = "1.0.0"


class Tolerances:
    INPUT_NORM = 1e-9
    STATE_NORM = 1e-10
    HERMITIAN = 1e-12
    DENSITY_HERMITIAN = 1e-10
    DENSITY_TRACE = 1e-10
    EIGEN_CLIP = 1e-8
    EIGEN_ZERO = 1e-12
    ZERO_PROBABILITY = 1e-14
    FIT_MAGNITUDE = 1e-13
    MAX_GAMMA_DT = 1e-2
    CUTOFF_POPULATION = 1e-3
    DECISIVE_HIGH = 0.99
    DECISIVE_LOW = 0.01


class Defaults:
    BUS_PHOTON_CUTOFF = 2
    BUS_PULSE_DETUNING_RATIO = 0.4
    BUS_DETUNING_WARNING = 5.0
    BUS_SAMPLES = 41
    LINDBLAD_STEPS_PER_WINDOW = 1000
    SUPEROPERATOR_MAX = 4096
    GROVER_STEPS = 400
    MIN_FIT_SAMPLES = 10


class CsvFormat:
    FLOAT_FORMAT = "%.17g"
    LINE_TERMINATOR = "\n"
    COMMENT = "# "


class FileNames:
    QUARTER_ENTROPY = "quarter_entropy.csv"
    SUMMARY = "summary.json"
