import argparse
import json
import logging

from dataclasses import dataclass, field
from pathlib import Path
from typing import Any, Dict, Union

from contagion.sim import SimConfig
from contagion.solver import SolverConfig
from contagion.utils.common import config_hash, fresh_seed, to_jsonable


logger = logging.getLogger(__name__)


# Options which do not change the content of the outputs
HASH_EXCLUDED = frozenset({"out", "workers", "progress", "log_level", "config"})

RANDOMIZED_COMMANDS = frozenset({"simulate", "stats", "nulltest", "pipeline"})


class ConfigError(ValueError):
    """Raised when a configuration file does not match the command."""


def read_config_file(path: Union[str, Path]) -> Dict[str, str]:
    """
    Read a plain text ``key=value`` file. Blank lines and lines starting
    with ``#`` are ignored; keys may use dashes or underscores.
    """
    values = {}
    with open(path, encoding="utf-8") as fp:
        for lineno, line in enumerate(fp, start=1):
            line = line.strip()
            if not line or line.startswith("#"):
                continue
            if "=" not in line:
                raise ConfigError(f"{path}:{lineno}: expected key=value, got {line!r}")
            key, value = (x.strip() for x in line.split("=", 1))
            values[key.replace("-", "_")] = value
    return values


def _convert(action: argparse.Action, value: str) -> Any:
    if isinstance(action, (argparse._StoreTrueAction, argparse._StoreFalseAction)):
        lowered = value.lower()
        if lowered not in ("true", "false", "1", "0", "yes", "no"):
            raise ConfigError(f"{action.dest}: expected a boolean, got {value!r}")
        return lowered in ("true", "1", "yes")
    convert = action.type or str
    if action.nargs in ("+", "*"):
        return [convert(x.strip()) for x in value.split(",") if x.strip()]
    return convert(value)


def apply_config_file(parser: argparse.ArgumentParser, path: Union[str, Path]) -> None:
    """
    Use the values of a configuration file as defaults of ``parser``, so
    that flags given on the command line still override them.

    Raises:
        ConfigError: If a key is not an option of ``parser``, or a value
            cannot be converted.
    """
    actions = {a.dest: a for a in parser._actions if a.dest != "help"}
    defaults = {}
    for key, value in read_config_file(path).items():
        if key not in actions or key == "config":
            raise ConfigError(f"Unknown configuration key {key!r} for this command.")
        try:
            defaults[key] = _convert(actions[key], value)
        except (TypeError, ValueError) as e:
            raise ConfigError(f"Invalid value for {key!r}: {e}") from e
    parser.set_defaults(**defaults)


@dataclass(frozen=True)
class RunConfig:
    """
    Fully resolved configuration of a command run.

    Args:
        command (str): The sub-command.
        params (dict): Every option, after config file and flags.
    """

    command: str
    params: Dict[str, Any] = field(default_factory=dict)

    @classmethod
    def from_namespace(cls, args: argparse.Namespace) -> "RunConfig":
        params = {k: v for k, v in vars(args).items() if k not in ("command", "func")}
        if args.command in RANDOMIZED_COMMANDS and params.get("seed") is None:
            params["seed"] = fresh_seed()
            logger.warning("No seed given, using seed=%d", params["seed"])
        return cls(args.command, to_jsonable(params))

    def __getattr__(self, name: str) -> Any:
        if name == "params":
            raise AttributeError(name)
        try:
            return self.params[name]
        except KeyError:
            raise AttributeError(name) from None

    @property
    def hashed(self) -> Dict[str, Any]:
        return {
            "command": self.command,
            **{k: v for k, v in self.params.items() if k not in HASH_EXCLUDED},
        }

    @property
    def hash(self) -> str:
        return config_hash(self.hashed)

    @property
    def out_dir(self) -> Path:
        return Path(self.params.get("out") or ".")

    def solver_config(self) -> SolverConfig:
        return SolverConfig(
            I0=self.params.get("I0", 1.0),
            damping=self.params.get("damping", 0.5),
            tolerance=self.params.get("tolerance", 1e-8),
            max_iter=self.params.get("max_iter", 100_000),
        )

    def sim_config(self, rng_seed: int) -> SimConfig:
        return SimConfig(
            cascades_per_seed=self.params.get("cascades_per_seed", 100),
            rng_seed=rng_seed,
            max_steps=self.params.get("max_steps"),
        )

    def write(self) -> Path:
        """Write ``config.json`` in the output directory."""
        path = self.out_dir / "config.json"
        with open(path, "w", encoding="utf-8") as fp:
            json.dump(
                {"command": self.command, "params": self.params, "config_hash": self.hash},
                fp,
                sort_keys=True,
                indent=2,
            )
            fp.write("\n")
        return path
