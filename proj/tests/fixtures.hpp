#pragma once

// Named parameter sets shared by unit and acceptance tests.

#include <chemolv/model.hpp>

namespace chemolv::fixtures {

/// Everything zero except the self-limitation terms; chi off.
inline ModelParams plain() {
    ModelParams p;
    p.d1 = p.d2 = p.d3 = 1.0;
    p.chi1 = p.chi2 = 0.0;
    p.a0 = p.b0 = 1.0;
    p.a1 = p.b2 = 1.0;
    p.a2 = p.b1 = p.a3 = p.a4 = p.b3 = p.b4 = 0.0;
    p.k = p.l = p.lambda = 1.0;
    p.omega_measure = 1.0;
    return p;
}

/// Weak competition: a0=b0=1, a1=b2=2, a2=b1=1, local only.
inline ModelParams weak_competition(double chi = 0.0) {
    ModelParams p = plain();
    p.a1 = p.b2 = 2.0;
    p.a2 = p.b1 = 1.0;
    p.chi1 = p.chi2 = chi;
    return p;
}

/// u outcompeted: a0=1, b0=2, a1=1, a2=1.5, b1=0.5, b2=1, local only.
inline ModelParams u_excluded(double chi = 0.0) {
    ModelParams p = plain();
    p.a0 = 1.0;
    p.b0 = 2.0;
    p.a1 = 1.0;
    p.a2 = 1.5;
    p.b1 = 0.5;
    p.b2 = 1.0;
    p.chi1 = p.chi2 = chi;
    return p;
}

/// Cooperative pair with a2 = b1 = -0.5 and asymmetric growth.
inline ModelParams cooperative(double chi = 0.1) {
    ModelParams p = plain();
    p.a0 = 1.0;
    p.b0 = 0.5;
    p.a1 = p.b2 = 2.0;
    p.a2 = p.b1 = -0.5;
    p.chi1 = p.chi2 = chi;
    return p;
}

}  // namespace chemolv::fixtures
