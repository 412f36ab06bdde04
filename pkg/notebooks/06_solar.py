# %% [markdown]
# # Solar geometry and the Angstrom line
#
# Declination, sunset hour angle, day length and extraterrestrial daily
# irradiation for a few stations, then the one-variable Angstrom fit.

# %%
import numpy as np

from mggp import dataio, solar

for station in dataio.load_stations()[:4]:
    s = solar.solar_summary(station.latitude, 172)
    print(f"{station.name:12s} S0={s.day_length:6.3f} h  H0={s.h0_mj:6.2f} MJ/m^2")

# %%
days = np.arange(1, 366)
h0 = [solar.extraterrestrial_irradiation(28.58, int(n)) / 1e6 for n in days]
print("New Delhi H0 range:", min(h0), max(h0))

# %%
data = dataio.bundled_synthetic()
line = solar.angstrom_fit(data.X[:, 4], data.y)
resid = data.y - line.predict(data.X[:, 4])
print(f"a={line.a:.4f} b={line.b:.4f} rmse={np.sqrt(np.mean(resid**2)):.4f}")
