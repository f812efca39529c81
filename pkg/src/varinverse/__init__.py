"""Verification engine for semisprays, semi-basic 1-forms and Helmholtz conditions."""
