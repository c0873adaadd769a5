"""Instance generation, Matrix Market I/O, reports and the property-suite runner.

Submodules are imported explicitly (``relbound.harness.suite`` and so on);
the library modules depend on :mod:`.generators`, so this package keeps its
namespace empty to avoid import cycles.
"""
