# Lie algebras, representations, Chevalley-Eilenberg complexes
