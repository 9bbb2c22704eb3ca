import hashlib
import json
import math
import numpy as np

from typing import Any, List, Tuple, Union


def make_generator(seed: Union[int, np.random.SeedSequence]) -> np.random.Generator:
    """
    Create a counter-based random generator.

    Args:
        seed (int, SeedSequence): The seed or seed sequence.

    Returns:
        np.random.Generator: A generator over the Philox bit generator.
    """
    if not isinstance(seed, np.random.SeedSequence):
        seed = np.random.SeedSequence(int(seed))
    return np.random.Generator(np.random.Philox(seed))


def derive_seeds(seed: int, n: int) -> List[int]:
    """
    ``n`` independent integer seeds derived from one, for the steps of a
    pipeline that each take a plain seed.
    """
    return [
        int(s.generate_state(1)[0]) for s in np.random.SeedSequence(int(seed)).spawn(n)
    ]


def fresh_seed() -> int:
    """Draw a seed from OS entropy, small enough to be written in a config."""
    return int(np.random.SeedSequence().entropy % (2**32))


def ceil_fraction(fraction: float, n: int) -> int:
    """
    Ceiling of ``fraction * n`` robust to floating point noise,
    e.g. ``0.1 * 20`` is 2 and not 3.
    """
    return int(math.ceil(round(fraction * n, 9)))


def floor_fraction(fraction: float, n: int) -> int:
    """Floor of ``fraction * n`` robust to floating point noise."""
    return int(math.floor(round(fraction * n, 9)))


def config_hash(config: dict) -> str:
    """
    Hash of a resolved configuration.

    Args:
        config (dict): JSON serialisable configuration.

    Returns:
        str: sha256 hex digest of the canonical JSON form.
    """
    canonical = json.dumps(config, sort_keys=True, separators=(",", ":"), default=str)
    return hashlib.sha256(canonical.encode("utf-8")).hexdigest()


def to_jsonable(value: Any) -> Any:
    """Convert numpy scalars and arrays recursively into JSON types."""
    if isinstance(value, dict):
        return {str(k): to_jsonable(v) for k, v in value.items()}
    if isinstance(value, (list, tuple)):
        return [to_jsonable(v) for v in value]
    if isinstance(value, np.ndarray):
        return [to_jsonable(v) for v in value.tolist()]
    if isinstance(value, np.bool_):
        return bool(value)
    if isinstance(value, np.integer):
        return int(value)
    if isinstance(value, (float, np.floating)):
        return float(value) if np.isfinite(value) else None
    return value


def _validate_aligned(
    x: np.ndarray, y: np.ndarray, names: Tuple[str, str] = ("x", "y")
) -> Tuple[np.ndarray, np.ndarray]:
    x = np.asarray(x, dtype=float)
    y = np.asarray(y, dtype=float)
    assert x.ndim == 1 and y.ndim == 1, "Only 1d vectors are supported."
    assert x.shape == y.shape, (
        f"{names[0]} and {names[1]} must be aligned, "
        f"found {x.shape} and {y.shape}."
    )
    return x, y


def write_frame(frame, dest, config_hash: str = None, float_format: str = None) -> None:
    """
    Write a pandas frame as CSV, preceded by a ``# config_hash=...`` line.

    Args:
        frame (pd.DataFrame): The table.
        dest (str, Path or text file): Destination.
        config_hash (str): Hash of the producing config. Default to ``None``
        float_format (str): Passed to ``to_csv``. Default to ``None``
    """
    if hasattr(dest, "write"):
        if config_hash is not None:
            dest.write(f"# config_hash={config_hash}\n")
        frame.to_csv(dest, index=False, lineterminator="\n", float_format=float_format)
        return
    with open(dest, "w", encoding="utf-8", newline="") as fp:
        write_frame(frame, fp, config_hash=config_hash, float_format=float_format)


def write_json(obj: dict, dest, config_hash: str = None) -> None:
    """
    Write a JSON artifact with sorted keys, tagged with the config hash.

    Args:
        obj (dict): The content.
        dest (str or Path): Destination.
        config_hash (str): Hash of the producing config. Default to ``None``
    """
    obj = to_jsonable(dict(obj))
    if config_hash is not None:
        obj["config_hash"] = config_hash
    with open(dest, "w", encoding="utf-8") as fp:
        json.dump(obj, fp, sort_keys=True, indent=2)
        fp.write("\n")
