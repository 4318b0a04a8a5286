import numpy as np

from qinterp.qudit_sim import StateVector, basis_state


def operator_matrix(apply, layout):
    """Columns are the images of the computational basis states."""
    cols = []
    for idx in range(layout.dimension):
        cols.append(apply(basis_state(layout, layout.digits(idx))).amplitudes)
    return np.stack(cols, axis=1)


def random_state(layout, rng):
    v = rng.normal(size=layout.dimension) + 1j * rng.normal(size=layout.dimension)
    return StateVector(layout, v / np.linalg.norm(v))


ACCEPTANCE_RESULTS = {}


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE_RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for num in sorted(ACCEPTANCE_RESULTS):
        ok, detail = ACCEPTANCE_RESULTS[num]
        terminalreporter.write_line(f"criterion {num:2d}: {'PASS' if ok else 'FAIL'}  {detail}")
