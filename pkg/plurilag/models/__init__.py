# Request and report models
