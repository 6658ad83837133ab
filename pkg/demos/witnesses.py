# Certificates on the parameter plane.
from rileyslice import (
    FIGURE_EIGHT,
    batch_audit,
    density_trend,
    nielsen_witness,
    nonfree_certificate,
    sl_screen,
    supergroup_witness,
)
from rileyslice.words import polynomial_classes

lam = 1.5 + 0.5j

# a zeta near lam whose group contains a copy of the group at z0
for z0 in (2, FIGURE_EIGHT.z):
    r = supergroup_witness(z0, lam, max_len=3, max_exp=2)
    print(f"z0={z0:.4g}: word {r.word}, zeta={r.zeta:.6f}, |zeta-lam|={r.distance:.3f}, accepted={r.accepted}")

# larger budgets get closer to lam
print(density_trend(2, lam, [50, 100, 200, 400], max_len=6, max_exp=2))

# cycles of period 2N give N different gamma^2 values
for N in (1, 2):
    rep = nielsen_witness((1, 1), N)
    print(f"N={N}: {len(rep.cycles)} cycles, {len(rep.achieving)} with >= {N} distinct squares")

# p_s(z) = z means a relation in the group
print(nonfree_certificate(2))
print(nonfree_certificate(5))

print(sl_screen(0.3 + 0.4j).status, sl_screen(1.5).status)

audit = batch_audit(polynomial_classes(5, 3, 200))
print("audit passed:", audit.passed, "min |p| at sample points:", round(audit.min_modulus, 12))
