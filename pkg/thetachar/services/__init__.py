"""Services: expansion cache, verification suites, exports."""
