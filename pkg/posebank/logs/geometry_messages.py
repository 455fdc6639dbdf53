# info
ENUMERATE_GRID = 'Enumerating a %d x %d pose grid ...'
