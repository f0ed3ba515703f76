"""Spectra of the level Laplacians M_n(t, u, v, w) and of the subshift operators."""

from grigorchuk import (
    Params,
    dichotomy_table,
    ids_comparison,
    level_operator,
    level_spectrum,
    nesting_check,
    window_operator,
)

iso = Params(1, 1, 1, 1)
aniso = Params(1, 1, 2, 3)

# %% the level-2 Laplacian in path order
op = level_operator(2, iso)
print(op.to_dense())
print(level_spectrum(2, iso).eigenvalues)

# %% M_n against the window operator: their counting functions differ by a few eigenvalues
for n in range(4, 11):
    d = ids_comparison(n, aniso)
    print(f"n={n:2d}  sup |N_level - N_window| = {d:.6f} = {d * 2**n:g} / 2^n")

# %% spectra are nested: Sigma_n sits inside Sigma_(n+1)
print("nested up to level 10:", all(nesting_check(n, aniso, 1e-8) for n in range(1, 10)))

# %% the cover length with eps = 2^-n stabilises for isotropic weights
print("level  isotropic  anisotropic")
for a, b in zip(dichotomy_table(iso, range(6, 12)), dichotomy_table(aniso, range(6, 12))):
    print(f"{a['level']:5d}  {a['cover_length']:.6f}   {b['cover_length']:.6f}")

# %% window operators exist for each spacer at the origin
for s in "xyz":
    w = window_operator(3, aniso, s)
    print(s, w.diag, w.offdiag)
