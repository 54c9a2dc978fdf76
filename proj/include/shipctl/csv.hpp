#pragma once

#include <filesystem>
#include <ostream>
#include <string>

#include "shipctl/sim.hpp"

namespace shipctl {

// Column contract. The base header is
//   t,x,y,psi,u,v,r,tau_u,tau_r,tau1,tau2
// followed by ,xbar,ybar,vbar,z,ubar,L1,L2,D1,D2 (stabilize) or
// ,xe,ye,psie,ue,ve,re,vbare,ze,ubare,red,L3,err_norm (track).
std::string csv_header(Mode m);

// One row per sample, shortest round-trip decimals, rows in time order.
void write_csv(const TimeSeries& ts, std::ostream& out);

// Throws SimError on I/O failure.
void write_csv(const TimeSeries& ts, const std::filesystem::path& path);

}  // namespace shipctl
