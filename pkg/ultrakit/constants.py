# Enumeration bound for UP-representable choice functions
ENUMERATION_PERIOD = 8

# Probe family used for extensional comparisons of ultrafilters
PROBE_PREFIX = 3
PROBE_PERIOD = 4

PROBE_STRATEGY = "principal+factorial"
PROBE_STRATEGY_VERSION = 1

# Universality is only ever certified against this battery
BATTERY_VERSION = 1

# Cocone enumeration caps
MAX_COCONE_FIBER = 3
MAX_COCONE_OBJECTS = 4

# Search bound for principal-over witnesses on Nat carriers
PRINCIPAL_OVER_SEARCH = 64

# Check-suite defaults
DEFAULT_MAX_POINTS = 3
DEFAULT_FIBER_BOUND = 2
BRUTE_FORCE_POINTS = 3

LATTICE_QUERIES = 200
SAMPLED_INSTANCES = 100
SAMPLED_SPACES = 500
SAMPLED_MAPS = 1000
COHERENCE_CARRIER = 3

PRESHEAF_OBJECTS = 2
PRESHEAF_PARALLEL = 2

LAW_POINTS = 2
LAW_SHEAVES = 10
LAW_DIAGRAMS = 100
LAW_DIAGRAM_BOUND = 3

DESCENT_POINTS = 2
DESCENT_CENSUS_POINTS = 3
DESCENT_SAMPLED = 16
