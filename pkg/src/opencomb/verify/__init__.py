"""Identity suites: string and dilaton, open KdV, Catalan integrals, angular form."""
from .forms import FormalForm, angular_form, angular_identity
from .identities import OpenBrackets, catalan_identities, string_dilaton_check
from .report import CheckRecord, Report
from .series import ClosedBrackets, TruncatedSeries, open_kdv_check

__all__ = [
    "CheckRecord", "ClosedBrackets", "FormalForm", "OpenBrackets", "Report", "TruncatedSeries",
    "angular_form", "angular_identity", "catalan_identities", "open_kdv_check", "string_dilaton_check",
]
