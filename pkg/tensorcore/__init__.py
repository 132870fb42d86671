# Exact multilinear algebra and truncated jets
