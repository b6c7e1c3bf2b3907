class ErrorMessages:
    NORMALIZATION = "|alpha|^2 + |beta|^2 = {norm:.12g}, expected 1"
    BOSONS = "boson number must be >= 1, got {n}"
    AXIS = "unknown spin axis {axis!r}, expected one of x, y, z"
    SITE = "site {site} outside 1..{n_sites}"
    DIMENSION = "dimension mismatch: {got} vs {expected}"
    DIMENSION_CAP = "dimension {dim} exceeds cap {cap}; raise BOSEQ_DIM_CAP or pass allow_large"
    DUPLICATE_SITE = "site {site} appears twice in one product"
    NON_HERMITIAN = "operator is not Hermitian (max deviation {dev:.3g})"
    ZERO_PROBABILITY = "outcome k={k} on site {site} has probability {p:.3g}"
    STEP_SIZE = "gamma*dt = {value:.3g} exceeds {limit:g}"
    FIT = "cannot fit decay: {reason}"
    NEGATIVE_EIGENVALUE = "density matrix has eigenvalue {value:.3g}"
    CUTOFF = "photon population at cutoff {cutoff} is {population:.3g}"
    AMBIGUOUS = "oracle outcome not decisive: overlap_plus={plus:.6g}, overlap_minus={minus:.6g}"
    NO_PEAK = "trajectory has no interior maximum on [0, {t_max:g}]"
    IO = "cannot {action} {path}: {reason}"
