"""Unit quaternions stored (w, x, y, z)."""

from __future__ import annotations

import math

import numpy as np

IDENTITY = np.array([1.0, 0.0, 0.0, 0.0])


def normalize(q) -> np.ndarray:
    q = np.asarray(q, dtype=float)
    return q / np.linalg.norm(q)


def from_axis_angle(axis, angle: float) -> np.ndarray:
    axis = np.asarray(axis, dtype=float)
    axis = axis / np.linalg.norm(axis)
    s = math.sin(angle / 2.0)
    return np.array([math.cos(angle / 2.0), *(axis * s)])


def from_euler(roll: float, pitch: float, yaw: float) -> np.ndarray:
    """Intrinsic z-y'-x'' (yaw, pitch, roll) angles in radians."""
    qx = from_axis_angle((1, 0, 0), roll)
    qy = from_axis_angle((0, 1, 0), pitch)
    qz = from_axis_angle((0, 0, 1), yaw)
    return multiply(qz, multiply(qy, qx))


def multiply(a, b) -> np.ndarray:
    aw, ax, ay, az = a
    bw, bx, by, bz = b
    return np.array([
        aw * bw - ax * bx - ay * by - az * bz,
        aw * bx + ax * bw + ay * bz - az * by,
        aw * by - ax * bz + ay * bw + az * bx,
        aw * bz + ax * by - ay * bx + az * bw,
    ])


def to_matrix(q) -> np.ndarray:
    w, x, y, z = q
    return np.array([
        [1 - 2 * (y * y + z * z), 2 * (x * y - w * z), 2 * (x * z + w * y)],
        [2 * (x * y + w * z), 1 - 2 * (x * x + z * z), 2 * (y * z - w * x)],
        [2 * (x * z - w * y), 2 * (y * z + w * x), 1 - 2 * (x * x + y * y)],
    ])


def to_euler(q) -> tuple[float, float, float]:
    """(roll, pitch, yaw) in radians, inverse of :func:`from_euler`."""
    w, x, y, z = q
    roll = math.atan2(2 * (w * x + y * z), 1 - 2 * (x * x + y * y))
    pitch = math.asin(max(-1.0, min(1.0, 2 * (w * y - z * x))))
    yaw = math.atan2(2 * (w * z + x * y), 1 - 2 * (y * y + z * z))
    return roll, pitch, yaw


def exp_map(omega, dt: float) -> np.ndarray:
    """Quaternion for rotating by world-frame angular velocity ``omega`` over ``dt``."""
    omega = np.asarray(omega, dtype=float)
    rate = float(np.linalg.norm(omega))
    if rate * dt < 1e-12:
        return IDENTITY.copy()
    return from_axis_angle(omega / rate, rate * dt)


def angle_between(a, b) -> float:
    d = abs(float(np.dot(a, b)))
    return 2.0 * math.acos(min(1.0, d))
