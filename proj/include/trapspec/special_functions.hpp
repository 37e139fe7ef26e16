#pragma once

namespace trapspec {

// Confluent hypergeometric function of the second kind U(a, b, z), z > 0.
// For a >= 1 from the Laplace integral, otherwise by the backward recurrence
// in a started from that integral. Throws NumericError on overflow.
double tricomi_u(double a, double b, double z);

}  // namespace trapspec
