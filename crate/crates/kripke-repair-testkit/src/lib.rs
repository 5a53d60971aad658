// oracles land here
