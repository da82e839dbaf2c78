"""Runtime configuration, loadable from the environment (AGRIFED_* vars)."""

from __future__ import annotations

import os
from dataclasses import dataclass, field


@dataclass
class AppConfig:
    store_path: str = "./agrifed-store"
    listen_host: str = "127.0.0.1"
    listen_port: int = 8080
    node_url: str | None = None
    param_url: str | None = None
    epsilon_default: float = 1.0
    epsilon_min: float = 0.01
    epsilon_max: float = 1e12
    identity_mode: str = "local"
    auto_consent: bool = True
    capability_secret: str = "dev-capability-secret"
    capability_ttl_seconds: float = 60.0
    session_ttl_seconds: float = 24 * 3600.0
    chat_body_max_chars: int = 4096
    default_hyperparams: dict = field(
        default_factory=lambda: {
            "rounds": 5,
            "local_epochs": 3,
            "batch_size": 16,
            "learning_rate": 0.1,
            "l2": 1e-4,
            "seed": 0,
        }
    )

    @classmethod
    def from_env(cls, env: dict | None = None) -> "AppConfig":
        env = os.environ if env is None else env
        cfg = cls()
        cfg.store_path = env.get("AGRIFED_STORE", cfg.store_path)
        cfg.listen_host = env.get("AGRIFED_LISTEN_HOST", cfg.listen_host)
        cfg.listen_port = int(env.get("AGRIFED_LISTEN_PORT", cfg.listen_port))
        cfg.node_url = env.get("AGRIFED_NODE_URL", cfg.node_url)
        cfg.param_url = env.get("AGRIFED_PARAM_URL", cfg.param_url)
        cfg.epsilon_default = float(env.get("AGRIFED_EPSILON", cfg.epsilon_default))
        cfg.identity_mode = env.get("AGRIFED_IDENTITY_MODE", cfg.identity_mode)
        cfg.auto_consent = env.get("AGRIFED_AUTO_CONSENT", "1") not in ("0", "false", "no")
        cfg.capability_secret = env.get("AGRIFED_SECRET", cfg.capability_secret)
        return cfg
