"""Direct check on the unit ball.

For B = (0, 0, 1) the magnetic Neumann operator splits into azimuthal modes,
each a 2-D problem on the meridian half-disc.  The sum of (e_j - Lambda h)_-
and h times the count are compared with the boundary-integral predictions.
Convergence in h is slow (the remainder is only known to be o(1)).
Runs for about two minutes.
"""

from surfspec import ball3d

rows = ball3d.asymptotic_table([0.08, 0.05, 0.03], 0.8, 1.0)
print(f"predicted energy {rows[0].pred_energy:.6e}, predicted h N {rows[0].pred_count:.6e}\n")
print("   h    count  deficit     ratio_E  ratio_N")
for r in rows:
    print(f"{r.h:5.2f}  {r.count:5d}  {r.deficit:.4e}  {r.ratio_energy:7.3f}  {r.ratio_count:7.3f}")

w = ball3d.ball_window(0.05, 0.8, 1.0)
print(f"\nh = 0.05: contributing modes {w.contributing_modes()}")
print("eigenvalues / h:", " ".join(f"{e / 0.05:.4f}" for e in w.eigenvalues()))
