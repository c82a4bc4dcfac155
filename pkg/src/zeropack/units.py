"""Unit conversion constants.

Everything inside the package is SI: metres, seconds, pascals. Process
units (um, nm, min, bar, ...) appear only at the I/O boundary. Multiply
by a constant to convert into SI, divide to convert back out::

    >>> 1.5 * UM          # 1.5 um as metres
    1.5e-06
    >>> 2.5e-8 / NM       # metres as nm
    25.0
"""

NM = 1e-9
UM = 1e-6
MM = 1e-3

SECOND = 1.0
MINUTE = 60.0

PA = 1.0
MPA = 1e6
GPA = 1e9
BAR = 1e5
MBAR = 1e2
