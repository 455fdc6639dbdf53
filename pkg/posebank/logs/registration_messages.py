# info
SCALE_ROTATION = 'Recovered scale %.4f and rotation %.2f deg (confidence %.3f).'
BRUTE_FORCE = 'Running exhaustive scale/rotation search over a %d x %d grid ...'

# warning
SCALE_CLAMPED = 'Recovered scale %.4f outside bounds [%.3f, %.3f]; clamping.'

# error
SHAPE_MISMATCH = 'Registration failed: shapes %s and %s differ.'
ZERO_ENERGY = 'Registration failed: %s map has zero energy.'
EMPTY_SEARCH_GRID = 'Exhaustive search needs non-empty grids, got %d scales and %d rotations.'
