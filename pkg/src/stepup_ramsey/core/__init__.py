"""Core library for stepup_ramsey: delta machinery, colorings and checkers.
"""
