# Levinson Lab Test Suite
