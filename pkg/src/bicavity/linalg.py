"""Dense complex linear algebra on the fixed 8-dimensional atom + two-mode space.

The joint Hilbert space of the two-level atom and the two single-photon cavity
modes is spanned by 8 product states.  The ordering below is fixed once and
for all; every evolution matrix in this package is written in this basis.
States are plain numpy vectors of 8 complex amplitudes, propagators are 8x8
complex unitaries.  All functions here are pure; nothing is mutated.
"""

import numpy as np

DIM = 8

# index -> (atom level, photons in mode 1, photons in mode 2)
BASIS_LABELS = (
    ("e", 0, 0),
    ("g", 1, 1),
    ("e", 1, 1),
    ("g", 0, 0),
    ("e", 1, 0),
    ("g", 0, 1),
    ("e", 0, 1),
    ("g", 1, 0),
)

BASIS_INDEX = {label: i for i, label in enumerate(BASIS_LABELS)}

# the three states reachable from the excited-atom/empty-cavity start
IDX_E_00 = BASIS_INDEX[("e", 0, 0)]   # 0
IDX_G_01 = BASIS_INDEX[("g", 0, 1)]   # 5
IDX_G_10 = BASIS_INDEX[("g", 1, 0)]   # 7
SINGLE_EXCITATION = (IDX_E_00, IDX_G_01, IDX_G_10)


def identity():
    return np.eye(DIM, dtype=complex)


def basis_state(index):
    """Unit vector for one of the 8 product states (0-based index)."""
    s = np.zeros(DIM, dtype=complex)
    s[index] = 1.0
    return s


def apply(u, s):
    """Propagate a state: result_i = sum_j u_ij s_j."""
    return np.asarray(u) @ np.asarray(s)


def compose(u_later, u_earlier):
    """Sequential composition; the later factor acts on the left."""
    return np.asarray(u_later) @ np.asarray(u_earlier)


def unitarity_defect(u):
    """Max-norm deviation of U†U from the identity (0 for exact unitaries)."""
    u = np.asarray(u)
    return float(np.max(np.abs(u.conj().T @ u - np.eye(DIM))))


def norm(s):
    return float(np.linalg.norm(s))
