"""Top level for stepup_ramsey project.
"""

__version__ = "0.1.0"

PHI_FORMAT_VERSION = 1
PSI_FORMAT_VERSION = 1
CERTIFICATE_SCHEMA_VERSION = 1
