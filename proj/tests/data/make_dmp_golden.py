"""Reference trajectories for the arm movement primitives.

Integrates the four joint systems with a high-order adaptive solver at tight
tolerances and writes one row per output sample (30 rows, 4 joints) with 17
significant digits. Regenerate with: python3 make_dmp_golden.py > dmp_golden.csv
"""
import math

import numpy as np
from scipy.integrate import solve_ivp

THETA = [
    [1.0, 0.760, -0.03, 0.641, 0.274, 0.187, -0.77, 0.164],
    [0.164, -0.99, 0.029, -1.0, -0.39, -0.40, -0.75, 0.927],
    [-0.69, 0.927, -0.47, -0.77, 0.084, -0.05, 0.221, -0.88],
    [-0.72, 0.775, -0.88, 0.532, -0.98, 1.0, -0.70, 0.886],
]
N_STEPS = 30
ALPHA_Y, BETA_Y, ALPHA_X, GAIN, Y0 = 25.0, 6.25, 5.0, 300.0, 0.0

phase = np.arange(7) / 6.0
centers = np.exp(-ALPHA_X * phase)
gaps = centers[:-1] - centers[1:]
widths = np.append(4.0 * math.log(2.0) / gaps**2, 4.0 * math.log(2.0) / gaps[-1] ** 2)


def joint(params):
    w, g = np.array(params[:7]), params[7]

    def rhs(_, s):
        y, v, x = s
        psi = np.exp(-widths * (x - centers) ** 2)
        f = GAIN * (psi @ w) / psi.sum() * x * (g - Y0)
        return [v, ALPHA_Y * (BETA_Y * (g - y) - v) + f, -ALPHA_X * x]

    t = np.arange(N_STEPS) / N_STEPS
    sol = solve_ivp(rhs, (0.0, t[-1]), [Y0, 0.0, 1.0], method="DOP853", t_eval=t,
                    rtol=1e-13, atol=1e-14)
    return np.clip(sol.y[0], -1.0, 1.0)


cols = [joint(p) for p in THETA]
print("# t,shoulder_y,shoulder_x,arm_z,elbow_y")
for k in range(N_STEPS):
    print(",".join([f"{k * 5.0 / N_STEPS:.17g}"] + [f"{c[k]:.17g}" for c in cols]))
