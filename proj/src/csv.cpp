#include "shipctl/csv.hpp"

#include <fstream>

#include "shipctl/numfmt.hpp"

namespace shipctl {

std::string csv_header(Mode m) {
    std::string h = "t,x,y,psi,u,v,r,tau_u,tau_r,tau1,tau2";
    if (m == Mode::stabilize) h += ",xbar,ybar,vbar,z,ubar,L1,L2,D1,D2";
    if (m == Mode::track) h += ",xe,ye,psie,ue,ve,re,vbare,ze,ubare,red,L3,err_norm";
    return h;
}

void write_csv(const TimeSeries& ts, std::ostream& out) {
    std::string buf = csv_header(ts.mode);
    buf += '\n';
    for (std::size_t i = 0; i < ts.size(); ++i) {
        const ShipState& s = ts.state[i];
        const TrueInputs& tu = ts.tau[i];
        const ReducedInputs& tr = ts.tau_reduced[i];
        double base[] = {ts.t[i], s.x,       s.y,       s.psi,   s.u,     s.v,
                         s.r,     tu.tau_u,  tu.tau_r,  tr.tau1, tr.tau2};
        bool first = true;
        for (double q : base) {
            if (!first) buf += ',';
            first = false;
            append_double(buf, q);
        }
        if (ts.mode == Mode::stabilize) {
            const StabRecord& q = ts.stab[i];
            for (double v : {q.coords.xbar, q.coords.ybar, q.coords.vbar, q.coords.z,
                             q.coords.ubar, q.L1, q.L2, q.D1, q.D2}) {
                buf += ',';
                append_double(buf, v);
            }
        } else if (ts.mode == Mode::track) {
            const TrackRecord& q = ts.track[i];
            for (double v : {q.coords.xe, q.coords.ye, q.coords.psie, q.coords.ue,
                             q.coords.ve, q.coords.re, q.coords.vbare, q.coords.ze,
                             q.coords.ubare, q.red, q.L3, q.err_norm}) {
                buf += ',';
                append_double(buf, v);
            }
        }
        buf += '\n';
        if (buf.size() > (1u << 20)) {
            out << buf;
            buf.clear();
        }
    }
    out << buf;
}

void write_csv(const TimeSeries& ts, const std::filesystem::path& path) {
    std::ofstream f(path, std::ios::binary);
    if (!f) throw SimError("cannot open '" + path.string() + "' for writing");
    write_csv(ts, f);
    f.flush();
    if (!f) throw SimError("write failed for '" + path.string() + "'");
}

}  // namespace shipctl
