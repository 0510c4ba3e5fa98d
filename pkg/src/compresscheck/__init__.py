"""compresscheck: how much does JPEG compression hurt a vision model,
and which mitigation wins it back.

Subpackages/modules:

- ``jpeg``: quality-parameterized baseline codec (the lossy operator).
- ``autodiff``: reverse-mode differentiation engine and SGD machinery.
- ``models``: small task networks and the quality-blind corrector.
- ``checkpoint``: binary model persistence (.cchk).
- ``dataset``: deterministic synthetic shape datasets + folder I/O.
- ``mitigation``: the four mitigation strategies and their training.
- ``metrics``, ``sweep``, ``gradcam``, ``throughput``: the study harness.
- ``cli``: command-line front end.
"""

__version__ = "0.1.0"
