"""Tour of the omniwheel drive kinematics.

Run: python3 demos/wheel_speeds_tour.py
Shows which wheel speeds realize a few canonical body motions and that the
mapping round-trips through the forward model.
"""

from omnisoccer.kinematics import (
    BodyVelocity,
    forward_kinematics,
    inverse_kinematics,
)

MOTIONS = {
    "drive forward 1 m/s": BodyVelocity(1.0, 0.0, 0.0),
    "strafe left 1 m/s": BodyVelocity(0.0, 1.0, 0.0),
    "spin in place 2 rad/s": BodyVelocity(0.0, 0.0, 2.0),
    "forward arc": BodyVelocity(1.0, 0.0, 1.5),
}

for label, v in MOTIONS.items():
    w = inverse_kinematics(v)
    back = forward_kinematics(w)
    names = ("FL", "FR", "RR", "RL")
    speeds = ", ".join(f"{n} {s:+7.2f}" for n, s in zip(names, w.w))
    print(f"{label:24s} -> rad/s: {speeds}")
    err = max(abs(back.vx - v.vx), abs(back.vy - v.vy), abs(back.omega - v.omega))
    print(f"{'':24s}    round-trip error {err:.1e}")
