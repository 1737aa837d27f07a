import sys
import hashlib
import random
from datetime import datetime
from concurrent.futures import ProcessPoolExecutor
import pytz

from constants import bound_keys
from ultrakit.exceptions import ConfigError


quiet = False


def log(suite, message):
    if quiet:
        return
    sys.stderr.write(f"[{datetime.now(pytz.UTC).isoformat()}][{suite}] {message}\n")
    sys.stderr.flush()


def derive_seed(seed, *labels):
    """A 64-bit seed for one labelled stream of the run."""
    digest = hashlib.sha256("/".join([str(seed), *labels]).encode("utf-8")).digest()
    return int.from_bytes(digest[:8], "big")


def derive_rng(seed, *labels):
    return random.Random(derive_seed(seed, *labels))


def run_jobs(function, cases, jobs):
    """Map function over cases, in order; jobs > 1 spreads them over worker processes."""
    if jobs <= 1 or len(cases) <= 1:
        return list(map(function, cases))
    with ProcessPoolExecutor(max_workers=jobs) as pool:
        return list(pool.map(function, cases, chunksize=max(1, len(cases) // (jobs * 4))))


def parse_bounds(text):
    """``max_points=3,fiber_bound=2`` -> {"max_points": 3, "fiber_bound": 2}."""
    bounds = {}
    for item in filter(None, (part.strip() for part in text.split(","))):
        key, sep, value = item.partition("=")
        key = key.strip()
        if not sep or key not in bound_keys:
            raise ConfigError(f"bad bound {item!r}; expected key=value with key in {', '.join(bound_keys)}")
        try:
            bounds[key] = int(value)
        except ValueError:
            raise ConfigError(f"bound {key} must be an integer, got {value.strip()!r}") from None
        if bounds[key] < (0 if key == "seed" else 1):
            raise ConfigError(f"bound {key} is out of range")
    return bounds


def format_elapsed(start):
    time_values = {
        "seconds": ("minutes", 60),
        "minutes": ("hours", 60),
        "hours": ("days", 24),
    }
    seconds = (datetime.now(pytz.UTC) - start).total_seconds()
    info = {"seconds": seconds}
    for label, time_value in time_values.items():
        if info[label] >= time_value[1]:
            info[time_value[0]] = info[label] // time_value[1]
            info[label] %= time_value[1]
        else:
            break

    used_info = list(info.keys())[-2:]
    used_info.reverse()

    return " ".join(f"{int(info[label])} {label}" for label in used_info)
