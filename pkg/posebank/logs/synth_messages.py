# info
MAKE_TEMPLATE = 'Building template (seed %d, %d parts, asymmetry %.2f, features %s) ...'
MAKE_DATASET = 'Generating %d entries with seed %d into %s ...'

# error
BAD_STRENGTH = 'Instance strength %r outside [0, 1].'
