"""Physical constants (SI)."""

EPS0 = 8.8541878128e-12   # vacuum permittivity [F/m]
Q_E = 1.602176634e-19     # elementary charge [C], exact since 2019 SI
