"""Sphinx configuration file for TSSW package"""

from documenteer.conf.pipelinespkg import *  # type: ignore # noqa

project = "ts_sfh_torsion"
html_theme_options["logotext"] = project  # type: ignore # noqa
html_title = project
html_short_title = project

intersphinx_mapping["numpy"] = ("https://numpy.org/doc/stable", None)  # type: ignore # noqa
intersphinx_mapping["jsonschema"] = ("https://python-jsonschema.readthedocs.io/en/stable", None)  # type: ignore # noqa
