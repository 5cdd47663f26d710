#include <cstdio>
#include <numeric>
#include <cmath>
#include "idenet/estimator.hpp"
#include "idenet/netgen.hpp"
using namespace idenet; using namespace idenet::nn;

static GeneratedDataset mk(int64_t n, uint64_t seed, double tp){
    auto net = generate_ba(n, 2, seed); sample_attributes(net, seed);
    GenConfig g; g.tau_d=-1.0; g.tau_p=tp; g.mechanism=Mechanism::TieStrength;
    auto x = assign_treatments(net, 0.5, seed);
    return generate_outcomes(net, x, g, seed);
}

int main(int argc, char** argv){
    if (argc>1 && std::string(argv[1])=="fd") {
        // find seeds where FD passes for every parameter
        for (uint64_t seed=1; seed<=20; ++seed){
            auto data = mk(20, seed, 10.0);
            auto inputs = build_graph_inputs(data);
            TrainConfig c; c.maxiter=1; c.fdim=8; c.edim=2; c.seed=seed;
            auto model = init_model(inputs, c, Variant::Full);
            std::vector<int64_t> rows(inputs.n); std::iota(rows.begin(), rows.end(), 0);
            auto loss_at=[&](){ Tape t; auto fw=forward(model,inputs,t,true);
                return t.values(training_loss(t,fw,data.y,rows,0.7,3.0))[0]; };
            Tape tape; auto fw = forward(model, inputs, tape, true);
            auto loss = training_loss(tape, fw, data.y, rows, 0.7, 3.0);
            tape.backward(loss);
            int bad=0; double worst=0;
            for (auto& p : model.params){
                auto grad = tape.gradient(fw.param_tensors.at(p.name));
                for (size_t i=0;i<p.values.size();++i){
                    double keep=p.values[i], st=1e-4;
                    p.values[i]=keep+st; double up=loss_at();
                    p.values[i]=keep-st; double dn=loss_at();
                    p.values[i]=keep;
                    double fd=(up-dn)/(2*st);
                    double rel=std::abs(fd-grad[i])/std::max({1.0,std::abs(fd),std::abs(grad[i])});
                    if(rel>=1e-4){bad++; worst=std::max(worst,rel);}
                }
            }
            std::printf("seed=%llu bad=%d worst=%.3g\n",(unsigned long long)seed,bad,worst);
        }
        return 0;
    }
    // loss monotonicity probe
    for (int variant=0; variant<2; ++variant){
        int ok=0;
        for (uint64_t seed=0; seed<10; ++seed){
            auto data = mk(variant==0?120:500, 100+seed, 10.0);
            auto inputs = build_graph_inputs(data);
            TrainConfig c; c.seed=100+seed;
            if(variant==0){c.fdim=8;c.edim=2;}
            auto model = init_model(inputs, c, Variant::Full);
            std::vector<int64_t> rows(inputs.n); std::iota(rows.begin(), rows.end(), 0);
            std::vector<double> losses;
            for(int e=0;e<10;++e){
                Tape t; auto fw=forward(model,inputs,t,true);
                auto loss=training_loss(t,fw,data.y,rows,0.0,3.0);
                losses.push_back(t.values(loss)[0]);
                t.backward(loss);
                for(auto& p:model.params){
                    double lr=p.encoder_group?c.lr:c.lrest;
                    adam_step(p.values,t.gradient(fw.param_tensors.at(p.name)),p.adam,lr,c.weight_decay,c.clip);
                }
            }
            bool mono=true; for(size_t i=1;i<losses.size();++i) mono &= losses[i]<=losses[i-1]+1e-9;
            ok+=mono;
            if(seed<3){ std::printf("v%d seed%llu:",variant,(unsigned long long)seed);
                for(double l:losses) std::printf(" %.3f",l); std::printf(" mono=%d\n",mono);}
        }
        std::printf("variant=%d monotone=%d/10\n",variant,ok);
    }
    return 0;
}
