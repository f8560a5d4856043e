# Copyright 2026 The cvsteer Authors
#
# Licensed under the Apache License, Version 2.0 (the "License");
# you may not use this file except in compliance with the License.
# You may obtain a copy of the License at
#
#     http://www.apache.org/licenses/LICENSE-2.0
#
# Unless required by applicable law or agreed to in writing, software
# distributed under the License is distributed on an "AS IS" BASIS,
# WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
# See the License for the specific language governing permissions and
# limitations under the License.

"""Independent numpy model used to derive the frozen values in the C++ tests.

Builds covariance matrices with explicit symplectic matrices and computes
inferred variances with a pseudo-inverse, sharing no code with the library.
Run: python3 derive_expected.py
"""

import numpy as np

CHAIN = [(0, 1), (2, 0), (1, 3), (4, 2), (3, 5), (6, 4), (5, 7)]
PRESETS = {
    2: [50, 100, 100, 100, 100, 100, 100],
    3: [51.1, 50, 100, 100, 100, 100, 100],
    4: [50, 50, 50, 100, 100, 100, 100],
    5: [50.8, 33.3, 50, 50, 100, 100, 100],
    6: [50, 33.3, 33.3, 50, 50, 100, 100],
    7: [50.6, 25, 33.3, 33.3, 50, 50, 100],
    8: [50, 25, 25, 33.3, 33.3, 50, 50],
}


def squeezed(sq_db, anti_db, axis):
    a, b = 10 ** (sq_db / 10), 10 ** (anti_db / 10)
    return np.diag([a, b] if axis == "x" else [b, a])


def block_diag(blocks):
    n = sum(b.shape[0] for b in blocks)
    out = np.zeros((n, n))
    o = 0
    for b in blocks:
        k = b.shape[0]
        out[o:o + k, o:o + k] = b
        o += k
    return out


def splitter(cov, i, j, r):
    n = cov.shape[0]
    s = np.eye(n)
    t = np.sqrt(1 - r)
    for q in (0, 1):
        a, b = 2 * i + q, 2 * j + q
        s[a, a], s[a, b], s[b, a], s[b, b] = t, np.sqrt(r), -np.sqrt(r), t
    # route so each named rail keeps the fraction r of its own field
    p = np.eye(n)
    for q in (0, 1):
        p[[2 * i + q, 2 * j + q]] = p[[2 * j + q, 2 * i + q]]
    return p @ s @ cov @ s.T @ p.T


def loss(cov, i, t):
    n = cov.shape[0]
    s = np.eye(n)
    s[2 * i, 2 * i] = s[2 * i + 1, 2 * i + 1] = np.sqrt(t)
    out = s @ cov @ s.T
    out[2 * i, 2 * i] += 1 - t
    out[2 * i + 1, 2 * i + 1] += 1 - t
    return out


def inferred(cov, j, ks, q):
    a = 2 * j + q
    idx = [2 * k + q for k in ks]
    c = cov[np.ix_(idx, [a])]
    m = cov[np.ix_(idx, idx)]
    return cov[a, a] - (c.T @ np.linalg.pinv(m) @ c)[0, 0]


def steering_number(cov, j, ks):
    return inferred(cov, j, ks, 0) * inferred(cov, j, ks, 1)


def measured_inputs():
    return [squeezed(-4.1, 9.5, "p"), squeezed(-3.6, 8.9, "x")] + [np.eye(2)] * 6


def build(rs, inputs=None):
    cov = block_diag(inputs or measured_inputs())
    for (i, j), r in zip(CHAIN, rs):
        cov = splitter(cov, i, j, r / 100)
    return cov


def tripartite(cov, m1, m2, m3):
    h = 1 / np.sqrt(2)
    u = np.zeros(cov.shape[0])
    v = np.zeros(cov.shape[0])
    u[2 * m1], u[2 * m2], u[2 * m3] = 1, -h, -h
    v[2 * m1 + 1], v[2 * m2 + 1], v[2 * m3 + 1] = 1, h, h
    return (u @ cov @ u) * (v @ cov @ v)


def main():
    np.set_printoptions(precision=12)
    print("preset steering numbers per active rail")
    for n in range(2, 9):
        cov = build(PRESETS[n])
        act = list(range(n))
        s2 = [steering_number(cov, j, [k for k in act if k != j]) for j in act]
        print(n, [f"{x:.12f}" for x in s2])
    cov = build(PRESETS[3])
    print("n3 tripartite (2,1,3)", f"{tripartite(cov, 1, 0, 2):.12f}")
    rs = list(PRESETS[3])
    rs[0] = 50
    print("n3 R12=50 tripartite (2,1,3)", f"{tripartite(build(rs), 1, 0, 2):.12f}")
    pure = [squeezed(-10, 10, "p"), squeezed(-10, 10, "x")] + [np.eye(2)] * 6
    print("pure10 R12=50 tripartite (2,1,3)", f"{tripartite(build(rs, pure), 1, 0, 2):.12f}")
    print("vacuum tripartite", f"{tripartite(np.eye(6), 0, 1, 2):.12f}")
    epr = block_diag([squeezed(-3.0103, 3.0103, "p"), squeezed(-3.0103, 3.0103, "x")])
    epr = splitter(epr, 0, 1, 0.5)
    print("epr cov", np.round(epr, 12).tolist())
    print("epr inferred x", f"{inferred(epr, 1, [0], 0):.12f}")
    print("epr after loss 0.5 on rail 1 steering of rail 2",
          f"{steering_number(loss(epr, 0, 0.5), 1, [0]):.12f}")
    cov = build(PRESETS[2])
    for t in (0.5, 0.4, 0.3, 0.2, 0.1, 0.0):
        print("n2 loss", 1 - t, f"{steering_number(loss(cov, 0, t), 1, [0]):.12f}")
    rs = list(PRESETS[3])
    rs[1] = 50
    cov = build(rs)
    print("balanced VBS_31 n3 S_A|B S_A|C S_A|BC",
          f"{np.sqrt(steering_number(cov, 1, [0])):.12f}",
          f"{np.sqrt(steering_number(cov, 1, [2])):.12f}",
          f"{np.sqrt(steering_number(cov, 1, [0, 2])):.12f}")


if __name__ == "__main__":
    main()
