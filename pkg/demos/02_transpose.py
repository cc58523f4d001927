
# coding: utf-8

# # Transposed channels
#
# The transpose of a unital channel runs "backwards" relative to the
# reference: it maps observables on the input back to observables on the output.

# In[1]:

import numpy as np

import cjkit
from cjkit.rand import random_channel, random_reference


# In[2]:

rng = np.random.default_rng(2)
chan = random_channel(3, 2, rng)
rho0 = random_reference(3, rng)
pair = cjkit.transpose_channel(chan, rho0)
print("output state rho1:\n", np.round(pair.rho1.matrix, 4))
print("defining relation residual:", pair.residual)


# Transposing twice, relative to rho1, lands back on the original channel.

# In[3]:

twice = cjkit.transpose_channel(pair.transposed, pair.rho1)
b = np.diag([1.0, -1.0]).astype(complex)
print(np.abs(cjkit.apply_heisenberg(twice.transposed, b) - cjkit.apply_heisenberg(pair.original, b)).max())


# For amplitude damping the transpose moves population upward: the
# excited-state projector picks up weight on the ground state.

# In[4]:

amp = cjkit.amplitude_damping(0.4)
tr = cjkit.transpose_channel(amp, cjkit.make_reference(np.diag([0.6, 0.4])))
print(np.round(cjkit.apply_heisenberg(tr.transposed, np.diag([0.0, 1.0]).astype(complex)).real, 4))
