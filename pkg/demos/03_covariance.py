
# coding: utf-8

# # Covariance, twirling and phase-covariant families

# In[1]:

import numpy as np

import cjkit
from cjkit.phase_covariant import number_phase_rep, rotation_family
from cjkit.rand import random_channel


# A random qubit channel is not SU(2) covariant.  Twirling projects it onto
# the covariant ones, and the result is a depolarizing channel.

# In[2]:

rng = np.random.default_rng(3)
spin = cjkit.spin_representation(0.5)
rho0 = cjkit.maximally_mixed(2)
chan = random_channel(2, 2, rng)
print("before:", cjkit.check_covariance(chan, spin, spin, rho0).residual)
tw = cjkit.twirl(chan, spin, spin, rho0)
print("after: ", cjkit.check_covariance(tw, spin, spin, rho0).residual)


# Phase shifts on a truncated oscillator: the rotation family is covariant,
# and the tau table comes back out of the channel.

# In[3]:

fam = rotation_family(4, 0.25)
ch = cjkit.build_channel(fam)
rho = cjkit.make_reference(np.diag([0.4, 0.3, 0.2, 0.1]))
rep = number_phase_rep(4)
print(cjkit.check_covariance(ch, rep, rep, rho).as_dict())
print({k: complex(np.round(v, 4)) for k, v in cjkit.extract_tau(ch, rho).taus.items()})


# Modular covariance: the identity channel commutes with the modular flow.

# In[4]:

print(cjkit.check_modular_covariance(cjkit.identity_channel(4), rho, h=-rho.log).as_dict())
