"""Corona-problem and stable-rank toolkit for Dirichlet-type spaces."""
