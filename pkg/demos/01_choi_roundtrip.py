
# coding: utf-8

# # Choi states relative to a reference state
#
# A unital channel written with Kraus operators is turned into a Choi state
# relative to a faithful, non-uniform reference, then read back.

# In[1]:

import numpy as np

import cjkit
from cjkit.choi import choi_rank
from cjkit.linalg import fro


# Amplitude damping with gamma = 0.3 and a reference that favours the ground state.

# In[2]:

chan = cjkit.amplitude_damping(0.3)
rho0 = cjkit.make_reference(np.diag([0.7, 0.3]))
s = cjkit.choi_from_channel(chan, rho0)
print(np.round(s.matrix.real, 4))


# The first marginal is the reference itself.

# In[3]:

print("margin residual:", s.margin_residual)


# Reading the Kraus form back gives a minimal set, one operator per unit of Choi rank.

# In[4]:

back = cjkit.channel_from_choi(s)
print(len(back), "Kraus operators, rank", choi_rank(s))
units = [np.outer(np.eye(2)[i], np.eye(2)[j]) for i in range(2) for j in range(2)]
print("action gap:", max(fro(cjkit.apply_heisenberg(back, b) - cjkit.apply_heisenberg(chan, b)) for b in units))


# A redundant presentation collapses to the same minimal set.

# In[5]:

k0, k1 = chan.kraus
padded = cjkit.Channel(2, 2, (k0 / np.sqrt(2), k0 / np.sqrt(2), k1))
print(len(padded), "->", len(cjkit.channel_from_choi(cjkit.choi_from_channel(padded, rho0))))
