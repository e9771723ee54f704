"""Discrete F-16 short-period model with a one-step elevator-state delay.

Matrices are the published discrete-time benchmark values (sampling period
0.1 s), consumed directly; weights q0 = 2 I and r0 = I_2.
"""

from __future__ import annotations

import numpy as np

from .delay import DelayInitialCondition, DelaySystem

A0 = np.array([
    [1.0000, 0.1025, 0.2080, -0.0879, -0.0057],
    [0.0000, 1.1175, 4.1534, -1.8042, -0.1010],
    [0.0000, 0.0955, 1.0722, -0.0994, -0.0153],
    [0.0000, 0.0000, 0.0000, 1.0000, 0.0000],
    [0.0000, 0.0000, 0.0000, 0.0000, 0.1353],
])

AD = np.array([
    [0.0, 0.0, 0.0, 0.0594, 0.0],
    [0.0, 0.0, 0.0, -1.8165, 0.0],
    [0.0, 0.0, 0.0, 0.0434, 0.0],
    [0.0, 0.0, 0.0, -2.0000, 0.0],
    [0.0, 0.0, 0.0, 0.0000, 0.0],
])

G = np.array([
    [-0.0581, -0.0040],
    [-1.7586, -0.1131],
    [-0.0720, -0.0175],
    [2.0000, 0.0000],
    [0.0000, 0.8647],
])

XI0 = np.array([4.0, 1.0, -8.0, -6.0, 9.0])
XIM1 = np.array([4.0, 4.0, 8.0, -6.0, 10.0])


def delay_system() -> DelaySystem:
    return DelaySystem(a0=A0, ad=AD, g=G, q0=2.0 * np.eye(5), r0=np.eye(2))


def initial_condition() -> DelayInitialCondition:
    return DelayInitialCondition(xi0=XI0, xim1=XIM1)
