# Differential algebra kernel
