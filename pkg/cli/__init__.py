# Config, expression language, suites, reports
