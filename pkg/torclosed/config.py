import os
import sys
from dataclasses import dataclass, replace


def load_env(name, *args, **kwargs):
    var = os.environ.get(name, *args, **kwargs)
    if var is None:
        print(f'Error: env variable "{name}" must not be empty', file=sys.stderr)
        exit(1)
    return var.strip()


def _typed_env(name, default, cast):
    raw = load_env(name, str(default))
    try:
        return cast(raw)
    except ValueError:
        print(f'Error: env variable "{name}" must be of type {cast.__name__}, got "{raw}"', file=sys.stderr)
        exit(1)


@dataclass(frozen=True)
class Settings:
    seed: int = 20240601
    budget: float = 120.0
    certify_bound: int = 64
    verify_limit: int = 400

    @classmethod
    def from_env(cls):
        return cls(
            seed=_typed_env('TORCLOSED_SEED', cls.seed, int),
            budget=_typed_env('TORCLOSED_BUDGET', cls.budget, float),
            certify_bound=_typed_env('TORCLOSED_CERTIFY_BOUND', cls.certify_bound, int),
            verify_limit=_typed_env('TORCLOSED_VERIFY_LIMIT', cls.verify_limit, int),
        )

    def override(self, **kwargs):
        # command line flags left unset arrive as None
        return replace(self, **{k: v for k, v in kwargs.items() if v is not None})


DEFAULTS = Settings()
