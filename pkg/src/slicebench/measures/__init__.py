"""Complexity measures for labeled functions on slices and cubes."""
