# %% [markdown]
# # Qudit registers and the field Fourier transform
#
# A register of m cells holds q^m amplitudes. The Fourier transform on one cell
# has entries e(-xy)/sqrt(q); at q = 2 it is the Hadamard gate.

# %%
import numpy as np

from qinterp.finite_field import field_new
from qinterp.polynomial import monomial_basis, random_polynomial
from qinterp.qudit_sim import (RegisterLayout, basis_state, fourier_matrix, iqft, measure,
                               oracle_phase, oracle_shift, qft)

print(np.round(fourier_matrix(field_new(2)).real, 6))

# %% [markdown]
# Phase kickback: shifting the target by f(x) between two Fourier transforms acts
# as the diagonal phase e(y f(x)). We check this on one basis state of GF(5).

# %%
F = field_new(5)
f = random_polynomial(monomial_basis(1, 2), F, seed=3)
layout = RegisterLayout.of(F, x=1, y=1)
s = basis_state(layout, [2, 4])
chained = iqft(oracle_shift(qft(s, "y"), f, "x", "y"), "y")
direct = oracle_phase(s, f, "x", "y")
print("max difference:", np.abs(chained.amplitudes - direct.amplitudes).max())

# %% [markdown]
# Measurement samples a full basis assignment and collapses the state.

# %%
digits, post = measure(qft(basis_state(layout, [0, 0]), "x"), np.random.default_rng(0))
print("measured digits:", digits)
