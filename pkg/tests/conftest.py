from __future__ import annotations

from hypothesis import HealthCheck, settings

# property tests drive whole simulations; wall-clock deadlines only flake
settings.register_profile(
    "default",
    deadline=None,
    suppress_health_check=[HealthCheck.too_slow],
)
settings.load_profile("default")
