from ultrakit import constants as library

exit_codes = {
    "pass": 0,
    "fail": 1,
    "error": 2,
}
bounds_variable = "ULTRAKIT_BOUNDS"
bound_keys = ("max_points", "fiber_bound", "probe_period", "jobs", "seed")
defaults = {
    "max_points": library.DEFAULT_MAX_POINTS,
    "fiber_bound": library.DEFAULT_FIBER_BOUND,
    "probe_period": library.PROBE_PERIOD,
    "jobs": 1,
    "seed": 0,
}
formats = ("text", "json")
