# Exact-arithmetic services: lattices, class search, quotients, fixed-point analysis and replay
