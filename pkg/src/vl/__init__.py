"""Transpiler toolchain for the vl hardware description language.

Source files (`.vl`) are lexed, parsed, resolved, checked, and lowered to
readable SystemVerilog.  The package also ships a formatter, a manifest/
lockfile-based dependency resolver, and a documentation generator.
"""

__version__ = "0.1.0"
