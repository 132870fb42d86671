# Weil complexes of linear actions and their polynomial forms
