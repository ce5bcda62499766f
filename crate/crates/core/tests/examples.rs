//! Every example must run to completion.

macro_rules! example {
    ($name:ident) => {
        mod $name {
            include!(concat!("../examples/", stringify!($name), ".rs"));

            #[test]
            fn runs() {
                main()
            }
        }
    };
}

example!(bulk_density);
example!(cd_identity);
example!(edge_kernel);
example!(figure2_fit);
example!(hermite_asymptotics);
example!(pfaffian_correlations);
example!(sample_cloud);
example!(skew_polynomials);
example!(special_functions);
