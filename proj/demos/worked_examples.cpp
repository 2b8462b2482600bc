// Limit predictions for the classic activations of a shallow Stable network.

#include <stablenn/stablenn.hpp>

#include <cstdio>

int main()
{
    using namespace stablenn;
    struct Case {
        const char* label;
        double a0, a1;
        ActivationSpec spec;
    };
    const Case cases[] = {
        {"tanh, a0 = a1 = 1.7", 1.7, 1.7, builtin("tanh")},
        {"identity, a0 = a1 = 1", 1.0, 1.0, builtin("identity")},
        {"relu, a0 = a1 = 1", 1.0, 1.0, builtin("relu")},
        {"z^3, a0 = a1 = 1.5", 1.5, 1.5, builtin("odd_power", 3)},
        {"z^1.5 (z > 0), a0 = 1.5, a1 = 1", 1.5, 1.0, builtin("positive_part_power", 1.5)},
    };
    std::printf("%-34s %9s %12s %s\n", "network", "stability", "scale", "normalization");
    for (const auto& c : cases) {
        const LimitPrediction p = shallow_limit(c.a0, 1.0, c.a1, 1.0, c.spec);
        std::printf("%-34s %9.4f %12.6f %s^(-1/%.4g)\n", c.label, p.stability, p.scale,
                    p.log_correction ? "(n log n)" : "n", p.scaling_exponent);
    }

    std::printf("\nproduct tails P(|X tau(Y)| > z), X, Y ~ S_1(1):\n");
    for (const char* name : {"identity", "relu"}) {
        const TailAsymptote t = product_tail(1, 1, 1, 1, builtin(name));
        std::printf("  %-8s %.6f z^-%.3g%s\n", name, t.constant, t.index, t.log_factor ? " log z" : "");
    }
}
