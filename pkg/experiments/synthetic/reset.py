def main():
    with open("results.csv", "w") as fp:
        fp.write("Seed,MeanDegree,Experiment,Method,Fraction,Statistic,Value\n")


if __name__ == "__main__":
    main()
