#pragma once

#include <memory>

#include "config.hpp"
#include "errors.hpp"
#include "trapspec/trapspec.h"

namespace tsc {

struct CurveDeleter {
    void operator()(ts_curve* p) const { ts_curve_free(p); }
};
struct StatesDeleter {
    void operator()(ts_states* p) const { ts_states_free(p); }
};
struct DipoleDeleter {
    void operator()(ts_dipole* p) const { ts_dipole_free(p); }
};
struct SpectrumDeleter {
    void operator()(ts_spectrum* p) const { ts_spectrum_free(p); }
};

using Curve = std::unique_ptr<ts_curve, CurveDeleter>;
using States = std::unique_ptr<ts_states, StatesDeleter>;
using Dipole = std::unique_ptr<ts_dipole, DipoleDeleter>;
using Spectrum = std::unique_ptr<ts_spectrum, SpectrumDeleter>;

Curve make_curve(const CurveConfig& c, const std::string& what);
Dipole make_dipole(const RunConfig& c);

}  // namespace tsc
