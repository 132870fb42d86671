# 2-term representations up to homotopy
